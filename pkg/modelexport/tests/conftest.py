import string

import pytest
import torch
from transformers import BertConfig, BertForMaskedLM

PROBE_WORDS = """
am i supposed to that story she for years make a decent living the committee
will proposal tomorrow he tried heavy door they results carefully believe
struggled approve open checked swallow tug push read
""".split()


def build_vocab_lines():
    tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    tokens += list(string.ascii_lowercase)
    tokens += ["##" + c for c in string.ascii_lowercase]
    for word in PROBE_WORDS:
        if word not in tokens:
            tokens.append(word)
        title = word.capitalize()
        if title not in tokens:
            tokens.append(title)
    tokens += ["?", ".", ",", "!"]
    return tokens


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A small random-weight BERT MLM checkpoint with its vocab.txt."""
    directory = tmp_path_factory.mktemp("tiny-bert")
    tokens = build_vocab_lines()
    (directory / "vocab.txt").write_text("\n".join(tokens) + "\n", encoding="utf-8")
    config = BertConfig(
        vocab_size=len(tokens),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=128,
    )
    torch.manual_seed(20200901)
    model = BertForMaskedLM(config)
    model.eval()
    model.save_pretrained(directory)
    return directory
