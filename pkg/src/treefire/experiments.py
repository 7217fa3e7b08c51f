"""Declarative experiments, seeded parallel trial execution, CSV output.

Each trial owns an rng derived by hashing (seed, kind, n, trial index)
through numpy's SeedSequence, so output is byte-identical for any thread
count and any execution order.  One subcommand exists per limit law or
structural property under study; summaries (sample statistics and
goodness-of-fit verdicts) are appended to the CSV as ``#SUMMARY`` lines
carrying the exact thresholds.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import cayley, cutting, distributions, fire, stats
from ._kernels import label_components

__all__ = [
    "KINDS",
    "ExperimentConfig",
    "ExperimentRun",
    "trial_rng",
    "run_trials",
    "summarize_trials",
    "run_experiment",
    "main",
]

KINDS = (
    "density",
    "cuts",
    "spine",
    "split",
    "fragment",
    "connect",
    "giant",
    "lemma4",
    "lemma6",
    "oracle",
)
_KIND_IDS = {kind: i for i, kind in enumerate(KINDS)}
_FIRE_KINDS = frozenset({"density", "connect", "giant"})
_TREE_KINDS = frozenset(
    {"density", "cuts", "spine", "split", "fragment", "connect", "giant", "lemma6"}
)

DEFAULT_Q_GRID = (1e-1, 10**-1.5, 1e-2, 10**-2.5)

# thresholds reported by the giant experiment: (column, exponent-or-fraction)
GIANT_THRESHOLDS = (
    ("exceeds_n06", "pow", 0.6),
    ("exceeds_n07", "pow", 0.7),
    ("exceeds_n08", "pow", 0.8),
    ("exceeds_half", "frac", 0.5),
    ("exceeds_09n", "frac", 0.9),
)

SCHEMAS = {
    "density": ("experiment", "n", "trial", "density", "largest_fraction"),
    "cuts": ("experiment", "n", "trial", "k", "cuts", "cuts_scaled"),
    "spine": ("experiment", "n", "trial", "spine_length"),
    "split": ("experiment", "n", "trial", "larger_side", "smaller_side"),
    "fragment": ("experiment", "n", "trial", "k", "first_size", "sizes"),
    "connect": ("experiment", "n", "trial", "u", "v", "connected"),
    "giant": ("experiment", "n", "trial", "largest", "largest_fraction")
    + tuple(name for name, _, _ in GIANT_THRESHOLDS),
    "lemma4": ("experiment", "trial", "beta", "cuts"),
    "lemma6": ("experiment", "n", "trial", "k", "second_largest", "in_window"),
    "oracle": ("experiment", "record", "n", "k", "m", "alpha", "value"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n_list: tuple[int, ...] = (100,)
    trials: int = 1000
    seed: int = 42
    threads: int = 1
    alpha: float | None = None
    a: float | None = None
    k: int | None = None
    eps: float = 0.25
    q_grid: tuple[float, ...] = DEFAULT_Q_GRID
    borel_support_max: int = 1_000_000
    significance: float = 0.01
    out_path: str | None = None
    dump_tree: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "q_grid", tuple(float(q) for q in self.q_grid))
        if any(n < 1 for n in self.n_list):
            raise ValueError("all n must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.kind in _FIRE_KINDS and (self.alpha is None) == (self.a is None):
            raise ValueError(f"kind {self.kind!r} needs exactly one of alpha or a")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be positive")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")

    @property
    def effective_k(self) -> int:
        """Target count (cuts) or part count (fragment); defaults 1 and 2."""
        if self.k is not None:
            return self.k
        return 2 if self.kind == "fragment" else 1

    @property
    def dinf_target_a(self) -> float | None:
        """Rate constant of the limiting density law, if this run has one."""
        if self.a is not None:
            return self.a
        if self.alpha is not None and self.alpha == 0.5:
            return 1.0
        return None


@dataclass
class ExperimentRun:
    config: ExperimentConfig
    rows_by_key: dict
    summary_lines: list[str]
    gof_results: list[stats.GofResult]
    out_path: str | None

    @property
    def all_pass(self) -> bool:
        return all(g.passed for g in self.gof_results)


def trial_rng(seed: int, kind: str, n: int, trial: int) -> np.random.Generator:
    """Independent per-trial stream hashed from (seed, kind, n, trial)."""
    entropy = (int(seed) % (1 << 64), _KIND_IDS[kind], int(n), int(trial))
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _fire_config(cfg: ExperimentConfig, n: int) -> fire.FireConfig:
    if cfg.alpha is not None:
        return fire.FireConfig.from_alpha(n, cfg.alpha)
    return fire.FireConfig.from_constant(n, cfg.a)


def _trial_row(cfg: ExperimentConfig, n: int, trial: int) -> dict:
    rng = trial_rng(cfg.seed, cfg.kind, n, trial)
    kind = cfg.kind
    if kind == "density":
        tree = cayley.sample_uniform_tree(n, rng)
        out = fire.run_fire(tree, _fire_config(cfg, n), rng)
        return {
            "n": n,
            "trial": trial,
            "density": out.density,
            "largest_fraction": out.largest_fraction,
        }
    if kind == "cuts":
        tree = cayley.sample_uniform_tree(n, rng)
        k = cfg.effective_k
        targets = rng.integers(1, n + 1, size=k)
        res = cutting.isolate(tree, targets, rng)
        return {
            "n": n,
            "trial": trial,
            "k": k,
            "cuts": res.cuts,
            "cuts_scaled": res.cuts / math.sqrt(n),
        }
    if kind == "spine":
        tree = cayley.sample_uniform_tree(n, rng)
        u, v = rng.integers(1, n + 1, size=2)
        return {
            "n": n,
            "trial": trial,
            "spine_length": cayley.tree_distance(tree, int(u), int(v)),
        }
    if kind == "split":
        tree = cayley.sample_uniform_tree(n, rng)
        larger, smaller = cutting.first_cut_split(tree, rng)
        return {"n": n, "trial": trial, "larger_side": larger, "smaller_side": smaller}
    if kind == "fragment":
        k = cfg.effective_k
        sizes = cayley.conditioned_borel_sample(k, n, rng)
        return {
            "n": n,
            "trial": trial,
            "k": k,
            "first_size": int(sizes[0]),
            "sizes": ";".join(str(int(s)) for s in sizes),
        }
    if kind == "connect":
        tree = cayley.sample_uniform_tree(n, rng)
        out = fire.run_fire(tree, _fire_config(cfg, n), rng)
        u, v = rng.integers(1, n + 1, size=2)
        return {
            "n": n,
            "trial": trial,
            "u": int(u),
            "v": int(v),
            "connected": int(fire.are_connected(out, int(u), int(v))),
        }
    if kind == "giant":
        tree = cayley.sample_uniform_tree(n, rng)
        out = fire.run_fire(tree, _fire_config(cfg, n), rng)
        f1 = int(out.component_sizes[0]) if out.component_sizes.size else 0
        row = {"n": n, "trial": trial, "largest": f1, "largest_fraction": f1 / n}
        for name, mode, value in GIANT_THRESHOLDS:
            cutoff = n**value if mode == "pow" else value * n
            row[name] = int(f1 >= cutoff)
        return row
    if kind == "lemma6":
        k = max(1, int(math.floor(n ** ((1.0 - cfg.eps) / 2.0))))
        sizes = cayley.conditioned_borel_sample(k, n, rng)
        second = int(np.partition(sizes, -2)[-2]) if k >= 2 else 0
        lo = n ** (1.0 - 2.0 * cfg.eps)
        hi = n ** (1.0 - cfg.eps / 2.0)
        return {
            "n": n,
            "trial": trial,
            "k": k,
            "second_largest": second,
            "in_window": int(lo <= second <= hi),
        }
    raise AssertionError(f"no per-n trial for kind {kind!r}")


def _trial_row_lemma4(cfg: ExperimentConfig, table, trial: int) -> dict:
    rng = trial_rng(cfg.seed, "lemma4", 0, trial)
    beta = distributions.borel_sample(rng, table)
    if beta == 1:
        cuts = 0
    else:
        tree = cayley.sample_uniform_tree(beta, rng)
        target = int(rng.integers(1, beta + 1))
        cuts = cutting.isolate(tree, [target], rng).cuts
    return {"trial": trial, "beta": beta, "cuts": cuts}


def _map_trials(cfg: ExperimentConfig, fn) -> list[dict]:
    if cfg.threads <= 1:
        return [fn(i) for i in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
        return list(ex.map(fn, range(cfg.trials)))


def run_trials(cfg: ExperimentConfig) -> dict:
    """All trial rows, keyed by n (or by 0 for the n-free lemma4 kind)."""
    run_id = f"{cfg.kind}-s{cfg.seed}"
    if cfg.kind == "oracle":
        rows = _oracle_rows(cfg)
    elif cfg.kind == "lemma4":
        table = distributions.borel_table(cfg.borel_support_max)
        rows = _map_trials(cfg, lambda i: _trial_row_lemma4(cfg, table, i))
    else:
        out = {}
        for n in cfg.n_list:
            out[n] = [
                {"experiment": run_id, **row}
                for row in _map_trials(cfg, lambda i, n=n: _trial_row(cfg, n, i))
            ]
        return out
    return {0: [{"experiment": run_id, **row} for row in rows]}


def _summary_line(tag: str, items: dict) -> str:
    parts = [f"{k}={_fmt(v)}" for k, v in items.items()]
    return "#SUMMARY," + tag + "," + ",".join(parts)


def _gof_line(n, gof: stats.GofResult, target: str) -> str:
    items = {"n": n, "test": gof.kind, "target": target}
    items.update(gof.as_row())
    items.pop("kind")
    return _summary_line("gof", items)


def summarize_trials(cfg: ExperimentConfig, rows_by_key: dict):
    """Summary lines plus the goodness-of-fit verdicts for a finished run."""
    lines: list[str] = []
    gofs: list[stats.GofResult] = []
    kind = cfg.kind
    if kind == "oracle":
        return lines, gofs
    if kind == "lemma4":
        rows = rows_by_key[0]
        xs = np.array([r["cuts"] for r in rows], dtype=np.float64)
        table_tail = distributions.borel_table(cfg.borel_support_max).tail_mass
        for q in cfg.q_grid:
            vals = -np.expm1(-q * xs)
            denom = q * math.log(1.0 / q)
            summ = stats.summarize(vals)
            lines.append(
                _summary_line(
                    "lemma4",
                    {
                        "q": q,
                        "ratio": summ.mean / denom,
                        "stderr": summ.stderr / denom,
                        "tail_mass": table_tail,
                        "support_max": cfg.borel_support_max,
                    },
                )
            )
        return lines, gofs
    for n, rows in sorted(rows_by_key.items()):
        if kind == "density":
            dens = np.array([r["density"] for r in rows])
            summ = stats.summarize(dens)
            lines.append(_summary_line("summary", {"n": n, "col": "density", **summ.as_row()}))
            a = cfg.dinf_target_a
            if a is not None:
                law = distributions.DinfLaw(a=a)
                gof = stats.ks_statistic(dens, law.cdf, cfg.significance)
                gofs.append(gof)
                lines.append(_gof_line(n, gof, f"dinf(a={a})"))
        elif kind == "cuts":
            k = cfg.effective_k
            scaled = np.array([r["cuts_scaled"] for r in rows])
            summ = stats.summarize(scaled)
            lines.append(_summary_line("summary", {"n": n, "col": "cuts_scaled", **summ.as_row()}))
            gof = stats.ks_statistic(
                scaled, lambda x: distributions.chi_cdf(k, x), cfg.significance
            )
            gofs.append(gof)
            lines.append(_gof_line(n, gof, f"chi({2 * k})"))
        elif kind == "spine":
            lam = np.array([r["spine_length"] for r in rows], dtype=np.int64)
            summ = stats.summarize(lam)
            lines.append(_summary_line("summary", {"n": n, "col": "spine_length", **summ.as_row()}))
            counts = np.bincount(lam, minlength=n)[:n]
            pmf = distributions.spine_pmf(n, np.arange(n))
            gof = stats.chi_square_gof(counts, pmf, cfg.significance)
            gofs.append(gof)
            lines.append(_gof_line(n, gof, "spine_pmf"))
        elif kind == "split":
            ms, pmf = distributions.first_cut_law(n)
            obs = np.array([r["larger_side"] for r in rows], dtype=np.int64)
            summ = stats.summarize(obs)
            lines.append(_summary_line("summary", {"n": n, "col": "larger_side", **summ.as_row()}))
            counts = np.array([(obs == m).sum() for m in ms], dtype=np.int64)
            gof = stats.chi_square_gof(counts, pmf, cfg.significance)
            gofs.append(gof)
            lines.append(_gof_line(n, gof, "first_cut_pmf"))
        elif kind == "fragment":
            k = cfg.effective_k
            first = np.array([r["first_size"] for r in rows], dtype=np.int64)
            summ = stats.summarize(first)
            lines.append(_summary_line("summary", {"n": n, "col": "first_size", **summ.as_row()}))
            pmf = distributions.conditioned_borel_marginal_pmf(k, n)
            counts = np.bincount(first - 1, minlength=pmf.size)[: pmf.size]
            gof = stats.chi_square_gof(counts, pmf, cfg.significance)
            gofs.append(gof)
            lines.append(_gof_line(n, gof, f"conditioned_borel_marginal(k={k})"))
        elif kind == "connect":
            conn = np.array([r["connected"] for r in rows], dtype=np.float64)
            summ = stats.summarize(conn)
            lines.append(_summary_line("summary", {"n": n, "col": "connected", **summ.as_row()}))
        elif kind == "giant":
            frac = np.array([r["largest_fraction"] for r in rows])
            summ = stats.summarize(frac)
            lines.append(
                _summary_line("summary", {"n": n, "col": "largest_fraction", **summ.as_row()})
            )
            for name, mode, value in GIANT_THRESHOLDS:
                cutoff = n**value if mode == "pow" else value * n
                hits = np.array([r[name] for r in rows], dtype=np.float64)
                lines.append(
                    _summary_line(
                        "exceedance",
                        {"n": n, "threshold": name, "cutoff": cutoff, "fraction": hits.mean()},
                    )
                )
        elif kind == "lemma6":
            hits = np.array([r["in_window"] for r in rows], dtype=np.float64)
            summ = stats.summarize(hits)
            lines.append(_summary_line("summary", {"n": n, "col": "in_window", **summ.as_row()}))
    return lines, gofs


def _oracle_rows(cfg: ExperimentConfig) -> list[dict]:
    """Exact small-n fixture rows: isolation means, first-cut law, fire
    density means; everything comes from brute-force enumeration."""
    rows: list[dict] = []
    blank = {"n": "", "k": "", "m": "", "alpha": ""}
    for n in cfg.n_list:
        if n > 4:
            raise ValueError("oracle enumeration supported for n <= 4")
        if n < 2:
            continue
        for k in range(1, n + 1):
            val = cutting.exhaustive_isolation_mean(n, k)
            rows.append({**blank, "record": "isolation_mean", "n": n, "k": k, "value": val})
        ms, _ = distributions.first_cut_law(n)
        exact = _exact_first_cut_law(n)
        for m in ms:
            rows.append({**blank, "record": "first_cut", "n": n, "m": int(m), "value": exact[int(m)]})
        trees = cayley.all_labeled_trees(n)
        for alpha in (0.5, 1.0):
            q = fire.FireConfig.from_alpha(n, alpha).q
            val = sum(fire.exact_density_mean(t, q) for t in trees) / len(trees)
            rows.append({**blank, "record": "fire_density_mean", "n": n, "alpha": alpha, "value": val})
    return rows


def _exact_first_cut_law(n: int) -> dict[int, float]:
    """P(larger first-cut side = m) by enumerating trees x edges directly."""
    trees = cayley.all_labeled_trees(n)
    tally: dict[int, float] = {}
    for tree in trees:
        indptr, adj_edge, adj_nbr = tree.adjacency
        for e in range(tree.n_edges):
            edge_ok = np.ones(tree.n_edges, dtype=np.bool_)
            edge_ok[e] = False
            labels, _ = label_components(
                tree.n, indptr, adj_edge, adj_nbr, edge_ok, np.ones(tree.n, dtype=np.bool_)
            )
            side = int((labels == labels[tree.edges[e, 0] - 1]).sum())
            m = max(side, n - side)
            tally[m] = tally.get(m, 0.0) + 1.0
    total = len(trees) * (n - 1)
    return {m: c / total for m, c in tally.items()}


def run_experiment(cfg: ExperimentConfig) -> ExperimentRun:
    """Run all trials, append summaries, and (if configured) write the CSV."""
    rows_by_key = run_trials(cfg)
    lines, gofs = summarize_trials(cfg, rows_by_key)
    path = cfg.out_path
    if path is not None:
        _write_csv(cfg, rows_by_key, lines, path)
        if cfg.dump_tree and cfg.kind in _TREE_KINDS:
            for n in cfg.n_list:
                tree = cayley.sample_uniform_tree(n, trial_rng(cfg.seed, cfg.kind, n, 0))
                cayley.dump_tree(tree, f"{path}.n{n}.tree")
    return ExperimentRun(cfg, rows_by_key, lines, gofs, path)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(cfg: ExperimentConfig, rows_by_key: dict, lines: list[str], path: str) -> None:
    cols = SCHEMAS[cfg.kind]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for key in sorted(rows_by_key):
            for row in rows_by_key[key]:
                fh.write(",".join(_fmt(row[c]) for c in cols) + "\n")
        for line in lines:
            fh.write(line + "\n")


def _parse_n_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treefire",
        description="Monte Carlo experiments for fire dynamics and random "
        "cutting on uniform Cayley trees; exit code 0 iff every "
        "goodness-of-fit verdict in the run passes.",
    )
    parser.add_argument("kind", choices=KINDS, help="experiment family to run")
    parser.add_argument("--config", help="JSON file with config fields; flags override")
    parser.add_argument("--n", help="comma-separated tree sizes, e.g. 100,1000,10000")
    parser.add_argument("--alpha", type=float, help="firing-rate exponent (rate n^-alpha)")
    parser.add_argument("--a", type=float, help="critical rate constant (rate a/sqrt(n))")
    parser.add_argument("--k", type=int, help="target count (cuts) / part count (fragment)")
    parser.add_argument("--trials", type=int, help="trials per n")
    parser.add_argument("--seed", type=int, help="master seed (64-bit)")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--eps", type=float, help="epsilon for lemma6 windows")
    parser.add_argument("--q-grid", help="comma-separated q grid for lemma4")
    parser.add_argument("--support-max", type=int, help="Borel table truncation point")
    parser.add_argument("--significance", type=float, help="GOF significance level")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--dump-tree", action="store_true", default=None,
                        help="also dump trial 0's tree per n (debugging)")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    base: dict = {"kind": args.kind}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        allowed = {f.name for f in fields(ExperimentConfig)}
        unknown = set(loaded) - allowed
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        loaded.pop("kind", None)
        base.update(loaded)
    overrides = {
        "n_list": _parse_n_list(args.n) if args.n else None,
        "alpha": args.alpha,
        "a": args.a,
        "k": args.k,
        "trials": args.trials,
        "seed": args.seed,
        "threads": args.threads,
        "eps": args.eps,
        "q_grid": tuple(float(t) for t in args.q_grid.split(",")) if args.q_grid else None,
        "borel_support_max": args.support_max,
        "significance": args.significance,
        "out_path": args.out,
        "dump_tree": args.dump_tree,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if "n_list" in base and not isinstance(base["n_list"], tuple):
        base["n_list"] = tuple(base["n_list"])
    if args.kind == "oracle" and "n_list" not in base:
        base["n_list"] = (2, 3, 4)
    if "out_path" not in base:
        base["out_path"] = f"treefire-{args.kind}.csv"
    return ExperimentConfig(**base)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        run = run_experiment(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in run.summary_lines:
        print(line)
    if run.out_path:
        print(f"wrote {run.out_path}")
    return 0 if run.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
