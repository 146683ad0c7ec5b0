import pytest
from pathlib import Path

from literalize.morph import bundled_exception_table
from literalize.scoring import BackendKind, ScorerBackend, UnigramFrequencyScorer
from literalize.wordnet import load_wordnet
from literalize.wordpiece import load_vocab

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def wordnet_dir():
    return DATA / "wordnet30"


@pytest.fixture(scope="session")
def kb(wordnet_dir):
    return load_wordnet(wordnet_dir)


@pytest.fixture(scope="session")
def vocab():
    return load_vocab(DATA / "vocab" / "vocab.txt")


@pytest.fixture(scope="session")
def exc():
    return bundled_exception_table()


@pytest.fixture(scope="session")
def toy_dir():
    return DATA / "toy"


@pytest.fixture(scope="session")
def toy_kb(toy_dir):
    return load_wordnet(toy_dir)


@pytest.fixture(scope="session")
def toy_vocab(toy_dir):
    return load_vocab(toy_dir / "vocab.txt")


@pytest.fixture(scope="session")
def toy_scorer(toy_dir):
    backend = ScorerBackend(
        kind=BackendKind.UNIGRAM_FREQUENCY,
        frequency_path=str(toy_dir / "frequencies.tsv"),
    )
    return UnigramFrequencyScorer(backend)


@pytest.fixture
def freq_scorer(tmp_path):
    """Build a UnigramFrequencyScorer from a counts dict."""

    def build(counts: dict[str, float]):
        path = tmp_path / "freq.tsv"
        path.write_text(
            "".join(f"{token}\t{count}\n" for token, count in counts.items()),
            encoding="utf-8",
        )
        backend = ScorerBackend(
            kind=BackendKind.UNIGRAM_FREQUENCY, frequency_path=str(path)
        )
        return UnigramFrequencyScorer(backend)

    return build
