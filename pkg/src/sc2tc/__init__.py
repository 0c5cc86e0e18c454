"""Simplified-to-Traditional Chinese conversion with subword language models.

The pipeline: a mapping table turns an SC sentence into a lattice of
subword mappings; an SC-side LM and a TC-side LM jointly pick the best
path and its TC rendering.
"""
from importlib import resources

from .convert import ConvertConfig, convert, convert_batch, max_match_convert
from .kernels import COMPILED
from .lm import NgramModel, UniformModel, load_model, perplexity, save_model, train_ngram
from .mapping import MappingEntry, MappingTable, build_lattice, load_mapping_table, read_mapping_table
from .metrics import EvalReport, evaluate, zipf_slope
from .segment import max_match, nbest_segmentations, viterbi_segment

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "ConvertConfig",
    "EvalReport",
    "MappingEntry",
    "MappingTable",
    "NgramModel",
    "UniformModel",
    "build_lattice",
    "convert",
    "convert_batch",
    "data_path",
    "evaluate",
    "load_mapping_table",
    "load_model",
    "max_match",
    "max_match_convert",
    "nbest_segmentations",
    "perplexity",
    "read_mapping_table",
    "save_model",
    "train_ngram",
    "viterbi_segment",
    "zipf_slope",
]


def data_path(name: str):
    """Path to a bundled desk-scale fixture, e.g. ``data_path("desk_table.tsv")``."""
    return resources.files(__name__) / "data" / name
