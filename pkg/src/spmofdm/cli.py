"""Batch experiment runner.

Subcommands: codebook, select, ber, bound, rate, rate-mc. Each takes a
plain key=value config file (one pair per line, # comments) and writes CSV
with a short provenance header (version, config hash, seed), so re-running
a config reproduces the output byte for byte. The SPM_SEED environment
variable overrides the config seed.

Exit codes: 0 success, 2 config error, 3 Monte-Carlo non-convergence,
4 search budget exhausted.
"""

import argparse
import hashlib
import math
import os
import sys

from . import __version__
from . import analysis, codebook, selection, simulation
from .combinatorics import optimal_k, optimal_k_ordered

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3
EXIT_BUDGET = 4


class ConfigError(Exception):
    pass


def _parse_bool(s):
    if s.lower() in ("1", "true", "yes"):
        return True
    if s.lower() in ("0", "false", "no"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_k(s):
    return "auto" if s.lower() == "auto" else int(s)


_KEYS = {
    "scheme": str,  # free-text label
    "variant": str,
    "variants": str,  # comma list, rate command only
    "n": int,
    "n_start": int,
    "n_stop": int,
    "k": _parse_k,
    "m": int,
    "d": int,
    "n_active": int,
    "constellation": str,
    "rotation_slots": int,
    "qam_parent": int,
    "selection": str,
    "pad_to": int,
    "budget": int,
    "time_budget": float,
    "algorithms": str,
    "graph": str,
    "snr_start": float,
    "snr_stop": float,
    "snr_step": float,
    "seed": int,
    "min_errors": int,
    "max_blocks": int,
    "draws": int,
    "with_bound": _parse_bool,
    "asymptotes": _parse_bool,
    "output": str,
}

_DEFAULTS = {
    "m": 2,
    "constellation": "psk",
    "qam_parent": 16,
    "selection": "none",
    "seed": 1905,
    "min_errors": 200,
    "max_blocks": 10_000_000,
    "draws": 4096,
    "with_bound": False,
    "asymptotes": False,
    "algorithms": "alg1,alg2,exact",
}


def load_config(path):
    """Parse a key=value config file; unknown keys and bad values are errors
    reported with their line number."""
    cfg = dict(_DEFAULTS)
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, val = text.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            cfg[key] = _KEYS[key](val)
        except ValueError as e:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {e}") from None
    cfg["_hash"] = hashlib.sha256(raw.encode()).hexdigest()[:12]
    if "SPM_SEED" in os.environ:
        cfg["seed"] = int(os.environ["SPM_SEED"])
    return cfg


def _require(cfg, *keys):
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise ConfigError(f"missing required config key(s): {', '.join(missing)}")


def _resolve_k(cfg):
    k = cfg.get("k")
    if k == "auto":
        variant = codebook.canonical_variant(cfg["variant"])
        n = cfg["n"]
        return optimal_k_ordered(n) if variant == "ospm" else optimal_k(n).argmax
    return k


def _scheme_from_config(cfg):
    _require(cfg, "variant", "n")
    return codebook.build_scheme(
        cfg["variant"],
        cfg["n"],
        k=_resolve_k(cfg),
        m=cfg["m"],
        d=cfg.get("d"),
        n_active=cfg.get("n_active"),
        constellation=cfg["constellation"],
        rotation_slots=cfg.get("rotation_slots"),
        qam_parent=cfg["qam_parent"],
        selection=cfg["selection"],
        pad_to=cfg.get("pad_to"),
        budget=cfg.get("budget"),
        time_budget=cfg.get("time_budget", 60.0),
        name=cfg.get("scheme"),
    )


def _snr_grid(cfg):
    _require(cfg, "snr_start", "snr_stop", "snr_step")
    start, stop, step = cfg["snr_start"], cfg["snr_stop"], cfg["snr_step"]
    if step <= 0 or stop < start:
        raise ConfigError("need snr_step > 0 and snr_stop >= snr_start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(start + i * step for i in range(count))


def _out_path(cfg, args, suffix):
    if args.out:
        return args.out
    if "output" in cfg:
        return cfg["output"]
    return f"spmofdm_{suffix}.csv"


def _write(path, cfg, body_lines, verbose):
    header = [
        f"# spmofdm v{__version__}",
        f"# config_hash={cfg['_hash']}",
        f"# seed={cfg['seed']}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(header + list(body_lines)) + "\n")
    if verbose:
        print(f"wrote {path}", file=sys.stderr)


def cmd_codebook(cfg, args):
    scheme = _scheme_from_config(cfg)
    dmin, dmin_rl, min_rank = codebook.codebook_dmin(scheme.codewords)
    usable = len(scheme.book.patterns)
    figures = codebook.rate(
        scheme.book.variant, scheme.n, k=_resolve_k(cfg), m=cfg["m"],
        d=cfg.get("d"), n_active=cfg.get("n_active"),
        usable_patterns=usable if cfg["selection"] != "none" else None,
    )
    out = _out_path(cfg, args, "codebook")
    export = codebook.export_codebook(scheme.book, m=cfg["m"])
    _write(out, cfg, export.rstrip("\n").splitlines(), args.verbose)
    rates_path = out + ".rates.csv"
    _write(
        rates_path, cfg,
        [
            "variant,N,K,M,f1,f2,rate,raw_rate",
            f"{figures.variant},{figures.n},{scheme.book.k},{cfg['m']},"
            f"{figures.f1},{figures.f2},{figures.rate:.9g},{figures.raw_rate:.9g}",
        ],
        args.verbose,
    )
    print(
        f"{scheme.name}: patterns={usable} f1={scheme.f1} f2={scheme.f2} "
        f"rate={scheme.rate_bits_per_subcarrier:.9g} d_min={dmin:.6g} "
        f"d_min_rank_limited={dmin_rl:.6g} min_rank={min_rank}"
    )
    return EXIT_OK


def cmd_select(cfg, args):
    if "graph" in cfg:  # user-supplied edge list instead of a variant book
        try:
            with open(cfg["graph"]) as fh:
                graph = selection.graph_from_edge_list(fh.read())
        except OSError as e:
            raise ConfigError(f"cannot read graph {cfg['graph']}: {e}") from None
    else:
        _require(cfg, "variant", "n")
        book = codebook.build_index_codebook(
            cfg["variant"], cfg["n"], k=_resolve_k(cfg), d=cfg.get("d"),
            n_active=cfg.get("n_active"),
        )
        graph = selection.build_hamming_graph(book.patterns)
    algos = [a.strip() for a in cfg["algorithms"].split(",") if a.strip()]
    rows = ["algorithm,size,bound,elapsed_ms,indices"]
    status = EXIT_OK
    for algo in algos:
        if algo == "alg1":
            res = selection.brute_force_k_clique(graph, budget=cfg.get("budget"))
            if not res.conclusive:
                status = EXIT_BUDGET
        elif algo == "alg2":
            res = selection.vertex_exclusion(graph)
        elif algo == "exact":
            res = selection.exact_max_clique(graph, time_budget=cfg.get("time_budget", 60.0))
            if not res.proven_optimal:
                status = EXIT_BUDGET
        else:
            raise ConfigError(f"unknown algorithm {algo!r}")
        if res.indices and not selection.is_clique(graph, res.indices):
            raise AssertionError(f"{algo} returned a non-clique")
        rows.append(selection.clique_result_csv_row(res))
        print(
            f"{algo}: size={res.size} bound={res.bound} "
            f"elapsed={res.elapsed_s * 1e3:.3f} ms"
            + ("" if res.conclusive else " (budget exhausted)")
        )
    _write(_out_path(cfg, args, "select"), cfg, rows, args.verbose)
    return status


def cmd_ber(cfg, args):
    scheme = _scheme_from_config(cfg)
    sim = simulation.SimConfig(
        scheme=scheme, snr_db_grid=_snr_grid(cfg),
        min_bit_errors=cfg["min_errors"], max_blocks=cfg["max_blocks"],
        master_seed=cfg["seed"],
    )
    report = simulation.simulate_ber(sim, workers=args.workers)
    rows = list(simulation.ber_csv_rows(report))
    if cfg["with_bound"]:
        rows[0] += ",bound_ber"
        for i, p in enumerate(report.points, start=1):
            g = 10.0 ** (p.snr_db / 10.0)
            b = analysis.union_bound_ber(scheme.codewords, g)
            rows[i] += f",{b.ber_bound:.9g}"
    _write(_out_path(cfg, args, "ber"), cfg, rows, args.verbose)
    for p in report.points:
        print(f"{scheme.name} @ {p.snr_db:g} dB: ber={p.ber:.3e} "
              f"({p.bit_errors} errors / {p.blocks} blocks)"
              + ("" if p.converged else " [not converged]"))
    return EXIT_OK if report.converged else EXIT_NONCONVERGED


def cmd_bound(cfg, args):
    scheme = _scheme_from_config(cfg)
    rows = ["snr_db,bound_ber,pairs_enumerated,exact_flag"]
    for snr in _snr_grid(cfg):
        res = analysis.union_bound_ber(scheme.codewords, 10.0 ** (snr / 10.0))
        rows.append(analysis.bound_csv_row(res))
    _write(_out_path(cfg, args, "bound"), cfg, rows, args.verbose)
    return EXIT_OK


def cmd_rate(cfg, args):
    if "variants" in cfg:
        variants = [v.strip() for v in cfg["variants"].split(",") if v.strip()]
    else:
        _require(cfg, "variant")
        variants = [cfg["variant"]]
    if "n_start" in cfg or "n_stop" in cfg:
        _require(cfg, "n_start", "n_stop")
        n_range = range(cfg["n_start"], cfg["n_stop"] + 1)
    else:
        _require(cfg, "n")
        n_range = [cfg["n"]]
    with_asym = cfg["asymptotes"]
    rows = ["variant,N,K,M,f1,f2,rate,raw_rate" + (",asymptote" if with_asym else "")]
    for v in variants:
        vc = codebook.canonical_variant(v)
        for n in n_range:
            k = d = n_active = None
            if vc in ("spm", "ospm"):
                k = cfg.get("k", "auto")
                if k == "auto":
                    k = optimal_k_ordered(n) if vc == "ospm" else optimal_k(n).argmax
            elif vc == "mm":
                k = n
            elif vc == "dm":
                d = cfg.get("d", n // 2)
            elif vc == "ofdm-im":
                _require(cfg, "n_active")
                n_active = cfg["n_active"]
            try:
                fig = codebook.rate(vc, n, k=k, m=cfg["m"], d=d, n_active=n_active)
            except ValueError:
                continue  # e.g. k > n early in a sweep
            row = (
                f"{vc},{n},{k if k is not None else '-'},{cfg['m']},"
                f"{fig.f1},{fig.f2},{fig.rate:.9g},{fig.raw_rate:.9g}"
            )
            if with_asym:
                if vc in ("spm", "ospm") and cfg.get("k", "auto") != "auto":
                    asym = f"{codebook.asymptotic_rate(vc, k, cfg['m']):.9g}"
                elif vc in ("spm", "ospm", "fspm", "ofspm") and n > 1:
                    asym = f"{codebook.asymptotic_max_rate(vc, n, cfg['m']):.9g}"
                else:
                    asym = ""
                row += f",{asym}"
            rows.append(row)
    _write(_out_path(cfg, args, "rate"), cfg, rows, args.verbose)
    return EXIT_OK


def cmd_rate_mc(cfg, args):
    scheme = _scheme_from_config(cfg)
    sim = simulation.SimConfig(
        scheme=scheme, snr_db_grid=_snr_grid(cfg), master_seed=cfg["seed"],
    )
    report = simulation.estimate_rate(sim, draws=cfg["draws"])
    _write(_out_path(cfg, args, "rate_mc"), cfg, list(simulation.rate_csv_rows(report)),
           args.verbose)
    for p in report.points:
        print(f"{scheme.name} @ {p.snr_db:g} dB: rate={p.rate:.4f} +- {p.stderr:.4f}")
    return EXIT_OK


_COMMANDS = {
    "codebook": cmd_codebook,
    "select": cmd_select,
    "ber": cmd_ber,
    "bound": cmd_bound,
    "rate": cmd_rate,
    "rate-mc": cmd_rate_mc,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spmofdm", description="Set-partition modulation experiment runner"
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="key=value config file")
    parser.add_argument("--out", help="output path (overrides config 'output')")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except selection.BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
