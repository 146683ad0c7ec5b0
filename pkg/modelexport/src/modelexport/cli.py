"""Command-line entry points: export a checkpoint, verify an export."""

from __future__ import annotations

import argparse
import json
import sys

from .export import DEFAULT_PROBES, DownloadFailedError, export
from .bertgraph import ConversionFailedError
from .parity import ParityFailureError, SignatureMismatchError, verify_parity


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="modelexport", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="convert a checkpoint to model.onnx + vocab.txt + manifest.json")
    p.add_argument("model", help="hub name or local checkpoint directory")
    p.add_argument("out_dir")
    p.add_argument("--probe", action="append", default=[], help="fill-mask probe sentence (repeatable)")

    p = sub.add_parser("verify", help="check an exported graph against the reference model")
    p.add_argument("out_dir")
    p.add_argument("--probe", action="append", default=[])

    args = parser.parse_args(argv)
    probes = args.probe or list(DEFAULT_PROBES)
    try:
        if args.command == "export":
            manifest = export(args.model, args.out_dir, probes)
            print(json.dumps(manifest.to_dict(), indent=2))
        else:
            report = verify_parity(args.out_dir, probes)
            print(json.dumps(report.to_dict(), indent=2))
        return 0
    except (DownloadFailedError, ConversionFailedError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SignatureMismatchError as err:
        print(f"error: signature mismatch: {err}", file=sys.stderr)
        return 2
    except ParityFailureError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
