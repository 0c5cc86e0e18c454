import random

import pytest

from sc2tc import data_path
from sc2tc.cli import main
from sc2tc.lm import load_model, train_ngram
from sc2tc.mapping import read_mapping_table

HAIR_SC = "维护发展中国家共同利益"
HAIR_TC = "維護發展中國家共同利益"
HAIR_BASELINE_TC = "維護髮展中國家共同利益"


def data(name):
    return str(data_path(name))


@pytest.fixture(scope="session")
def desk_table():
    return read_mapping_table(data("desk_table.tsv"))


@pytest.fixture(scope="session")
def desk_models(tmp_path_factory):
    """SC/TC subword LMs for conversion plus a word-level SC LM for tokenizing, built by the CLI."""
    root = tmp_path_factory.mktemp("models")
    paths = {
        "sc": root / "sc.lm",
        "tc": root / "tc.lm",
        "sc_words": root / "sc_words.lm",
    }
    assert main(["train", "--corpus", data("desk_sc.txt"), "--dict", data("desk_table.tsv"), "--out", str(paths["sc"])]) == 0
    assert main(["train", "--corpus", data("desk_tc.txt"), "--dict", data("desk_tc_dict.txt"), "--out", str(paths["tc"])]) == 0
    assert main(["train", "--corpus", data("desk_sc.txt"), "--out", str(paths["sc_words"])]) == 0
    models = {name: load_model(p) for name, p in paths.items()}
    models["paths"] = {name: str(p) for name, p in paths.items()}
    return models


def read_segmented(name):
    with open(data(name), encoding="utf-8") as fh:
        return [line.split() for line in fh if line.strip()]


def random_corpus(rng: random.Random, vocab, sentences=30, max_len=6):
    return [[rng.choice(vocab) for _ in range(rng.randint(1, max_len))] for _ in range(sentences)]


def random_model(rng: random.Random, vocab, order=2, smoothing="kneser_ney"):
    return train_ngram(random_corpus(rng, list(vocab)), order=order, smoothing=smoothing)
