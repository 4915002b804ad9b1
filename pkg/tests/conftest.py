import pytest

from biblionet.corpus import save_corpus
from biblionet.fixtures import micro_corpus


@pytest.fixture
def corpus3():
    return micro_corpus()


@pytest.fixture
def corpus3_path(tmp_path):
    path = tmp_path / "corpus.jsonl"
    save_corpus(micro_corpus(), str(path))
    return path
