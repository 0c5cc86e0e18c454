"""Compiled vs pure-Python edit distance.

    python benchmarks/bench_kernels.py [--repeat 5]

Times both kernels on the desk corpus (prediction-sized sentence pairs) and
on synthetic long strings, checks they agree, and prints a speedup table.
"""
import argparse
import random
import timeit

from sc2tc import _editdist_py, data_path
from sc2tc.convert import max_match_convert
from sc2tc.mapping import read_mapping_table

try:
    from sc2tc import _editdist
except ImportError:  # extension not built
    _editdist = None


def desk_pairs():
    table = read_mapping_table(data_path("desk_table.tsv"))
    with open(data_path("desk_sc.txt"), encoding="utf-8") as f_sc, open(data_path("desk_tc.txt"), encoding="utf-8") as f_tc:
        return [(max_match_convert("".join(a.split()), table), "".join(b.split())) for a, b in zip(f_sc, f_tc)]


def long_pairs(rng, n, length):
    alphabet = "發髮干幹乾后後里裡abc"
    out = []
    for _ in range(n):
        a = "".join(rng.choice(alphabet) for _ in range(length))
        b = list(a)
        for _ in range(length // 10):
            b[rng.randrange(length)] = rng.choice(alphabet)
        out.append((a, "".join(b)))
    return out


def bench(name, pairs, repeat):
    preds, refs = [p for p, _ in pairs], [r for _, r in pairs]
    pure = min(timeit.repeat(lambda: _editdist_py.total_edit_distance(preds, refs), number=1, repeat=repeat))
    row = f"{name:<22} {len(pairs):>6} {pure * 1e3:>10.2f}"
    if _editdist is not None:
        assert _editdist.total_edit_distance(preds, refs) == _editdist_py.total_edit_distance(preds, refs)
        fast = min(timeit.repeat(lambda: _editdist.total_edit_distance(preds, refs), number=1, repeat=repeat))
        row += f" {fast * 1e3:>10.2f} {pure / fast:>8.1f}x"
    else:
        row += f" {'n/a':>10} {'n/a':>9}"
    print(row)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'workload':<22} {'pairs':>6} {'pure ms':>10} {'cython ms':>10} {'speedup':>9}")
    bench("desk corpus", desk_pairs(), args.repeat)
    bench("synthetic len 100", long_pairs(rng, 200, 100), args.repeat)
    bench("synthetic len 1000", long_pairs(rng, 10, 1000), args.repeat)


if __name__ == "__main__":
    main()
