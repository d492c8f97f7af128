"""Command-line experiment runner.

Subcommands: structure (exact subgroup reports), spectrum (autocorrelation
CSV + spectral report), useminorm (uniformity seminorm CSV), verify (replay
the built-in golden suite), catalog (list built-in systems).  Every spectral
command requires a seed and produces byte-identical output for a fixed
config; NILLAB_THREADS caps internal parallelism without changing results.

Exit codes: 0 success, 1 validation error, 2 golden-suite failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from fractions import Fraction

from . import spectral as sp
from . import structure as st
from .algebra import RationalIdeal, derived_subalgebra
from .catalog import catalog_build, catalog_entry, catalog_list, observable_for
from .serialize import load_system
from .spectral import Observable
from .structure import AffineNilsystem


class ConfigError(ValueError):
    pass


def _thread_cap() -> int:
    raw = os.environ.get("NILLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError("NILLAB_THREADS must be an integer, got %r" % raw)


def _load_sys(config: dict) -> AffineNilsystem:
    name = config.get("system")
    if not name:
        raise ConfigError("missing system")
    if name.endswith(".json") or os.path.sep in name:
        if not os.path.exists(name):
            raise ConfigError("system file %r not found" % name)
        return load_system(name)
    try:
        return catalog_build(name, config.get("params"))
    except KeyError as exc:
        raise ConfigError(str(exc))
    except ValueError as exc:
        raise ConfigError(str(exc))


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError("parameter %r is not of the form name=value" % item)
        k, v = item.split("=", 1)
        out[k] = v if v == "symbolic" else v
    return out


def _parse_observable(specs, dim: int) -> Observable:
    """Each spec is "k1,...,km:amplitude"; several specs sum."""
    if not specs:
        raise ConfigError("missing observable")
    terms: dict[tuple, complex] = {}
    for spec in specs:
        if ":" in spec:
            kpart, apart = spec.rsplit(":", 1)
            amp = complex(apart)
        else:
            kpart, amp = spec, 1.0
        k = tuple(int(x) for x in kpart.split(","))
        if len(k) != dim:
            raise ConfigError(
                "frequency vector %r has %d entries; system has %d coordinates"
                % (spec, len(k), dim)
            )
        terms[k] = terms.get(k, 0.0) + amp
    return Observable(dim, terms)


def _fmt(x: float) -> str:
    return "%.12e" % x


def _basis_lines(label: str, ideal: RationalIdeal) -> list[str]:
    lines = ["%s: dim %d" % (label, ideal.dim)]
    for row in ideal.basis:
        lines.append("  [" + ", ".join(str(x) for x in row) + "]")
    return lines


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_structure(config: dict) -> str:
    system = _load_sys(config)
    lines = ["system: %s" % (system.name or config.get("system"))]
    lines.append("algebra: dim %d, step %d" % (system.algebra.dim, system.algebra.step))
    tc = st.tau_commutator_ideal(system)
    lines += _basis_lines("tau_commutator_ideal", tc)
    J = st.discrete_factor_subgroup(system)
    lines += _basis_lines("discrete_factor_subgroup", J)
    hH = st.leibman_identity_component(system)
    lines += _basis_lines("leibman_identity_component", hH)
    lines += _basis_lines("derived_leibman", derived_subalgebra(hH))
    k = int(config.get("k", 1))
    lines += _basis_lines("leibman_lcs(k=%d)" % k, st.leibman_lcs(system, k))
    fd = st.quotient_system(system, J)
    lines.append("discrete_factor: torus dimension %d" % fd.quotient.algebra.dim)
    verdict = st.ergodicity_test(system)
    if verdict.ergodic:
        lines.append("ergodicity: ergodic")
    else:
        lines.append("ergodicity: nonergodic witness=%s"
                     % ",".join(str(v) for v in verdict.witness))
    return "\n".join(lines) + "\n"


def cmd_spectrum(config: dict) -> str:
    system = _load_sys(config)
    if config.get("seed") is None:
        raise ConfigError("spectral commands require a seed")
    seed = int(config["seed"])
    lags = int(config.get("lags", 256))
    N = int(config.get("samples", 10 ** 5))
    f = _parse_observable(config.get("observable"), system.algebra.dim)
    series = sp.autocorrelation(system, f, lags, N, seed)
    report = sp.classify(series, grid_size=int(config.get("grid", 64)))
    lines = ["lag,re_c,im_c"]
    for lag, v in zip(series.lags, series.values):
        lines.append("%d,%s,%s" % (lag, _fmt(v.real), _fmt(v.imag)))
    lines.append("# atom_mass=%s" % _fmt(report.atom_mass))
    lines.append("# c0=%s" % _fmt(report.c0))
    lines.append("# verdict=%s" % report.verdict)
    lines.append("# N=%d K=%d seed=%d" % (N, lags, seed))
    return "\n".join(lines) + "\n"


def cmd_useminorm(config: dict) -> str:
    system = _load_sys(config)
    if config.get("seed") is None:
        raise ConfigError("spectral commands require a seed")
    seed = int(config["seed"])
    N = int(config.get("samples", 10 ** 5))
    levels = config.get("levels") or [64]
    levels = [int(h) for h in levels]
    f = _parse_observable(config.get("observable"), system.algebra.dim)
    lines = ["s,estimate,stability_delta"]
    for s in range(1, len(levels) + 1):
        est = sp.uniformity_seminorm(system, f, s, tuple(levels[:s]), N, seed)
        lines.append("%d,%s,%s" % (s, _fmt(est.value), _fmt(est.stability_delta)))
    return "\n".join(lines) + "\n"


def cmd_catalog(config: dict | None = None) -> str:
    lines = []
    for e in catalog_list():
        sym = ",".join(e.symbols) if e.symbols else "-"
        lines.append("%s  symbols=%s  %s" % (e.name, sym, e.summary))
    return "\n".join(lines) + "\n"


# -- golden verification ---------------------------------------------------

_VERIFY_N = 2 ** 13
_VERIFY_K = 128
_VERIFY_SEED = 20240809


def _verify_structure(entry, system, out: list[str]) -> bool:
    exp = entry.expected
    ok = True

    def check(label, cond):
        nonlocal ok
        out.append("%s %s/%s" % ("PASS" if cond else "FAIL", entry.name, label))
        ok = ok and cond

    tc = st.tau_commutator_ideal(system)
    check("tau_ideal_dim", tc.dim == exp["tau_ideal_dim"])
    J = st.discrete_factor_subgroup(system)
    check("J", J.equals(RationalIdeal(system.algebra,
                                      [[Fraction(x) for x in r] for r in exp["J"]])))
    if "leibman_component" in exp:
        hH = st.leibman_identity_component(system)
        check("leibman", hH.equals(RationalIdeal(
            system.algebra, [[Fraction(x) for x in r] for r in exp["leibman_component"]])))
        check("derived_H", derived_subalgebra(hH).equals(RationalIdeal(
            system.algebra, [[Fraction(x) for x in r] for r in exp["derived_H"]])))
        check("leibman_lcs_1", st.leibman_lcs(system, 1).equals(RationalIdeal(
            system.algebra, [[Fraction(x) for x in r] for r in exp["leibman_lcs_1"]])))
    if "ergodic" in exp:
        v = st.ergodicity_test(system)
        check("ergodic", v.ergodic == exp["ergodic"] and v.witness == exp["witness"])
    return ok


def _verify_spectral(entry, system, out: list[str]) -> bool:
    ok = True

    def check(label, cond):
        nonlocal ok
        out.append("%s %s/%s" % ("PASS" if cond else "FAIL", entry.name, label))
        ok = ok and cond

    for spec in entry.observables:
        f = observable_for(entry, spec)
        if spec["verdict"] == "subtorus":
            series = sp.joint_autocorrelation(system, f, (8, 8), _VERIFY_N, _VERIFY_SEED)
            check("obs_%s" % spec["name"],
                  sp.subtorus_support_test(series, entry.expected["subtorus_direction"]))
            continue
        series = sp.autocorrelation(system, f, _VERIFY_K, _VERIFY_N, _VERIFY_SEED)
        report = sp.classify(series)
        check("obs_%s" % spec["name"], report.verdict == spec["verdict"])
    return ok


def cmd_verify(config: dict | None = None) -> tuple[str, int]:
    out: list[str] = []
    all_ok = True
    for entry in catalog_list():
        system = catalog_build(entry.name)
        all_ok = _verify_structure(entry, system, out) and all_ok
        all_ok = _verify_spectral(entry, system, out) and all_ok
    out.append("RESULT %s" % ("PASS" if all_ok else "FAIL"))
    return "\n".join(out) + "\n", (0 if all_ok else 2)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nillab",
                                description="nilsystem structure and spectrum laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp_):
        sp_.add_argument("--config", help="JSON config file; flags override its keys")
        sp_.add_argument("--system", help="catalog name or system file path")
        sp_.add_argument("--params", action="append", default=None,
                         metavar="NAME=VALUE", help="symbol substitution (rational or 'symbolic')")
        sp_.add_argument("--out", help="output file (default stdout)")

    s = sub.add_parser("structure", help="exact subgroup and ergodicity report")
    common(s)
    s.add_argument("--k", type=int, default=1, help="factor level for the lcs tower")

    s = sub.add_parser("spectrum", help="autocorrelation series and spectral report")
    common(s)
    s.add_argument("--observable", action="append", metavar="K1,..,KM:AMP")
    s.add_argument("--lags", type=int, default=256)
    s.add_argument("--samples", type=int, default=10 ** 5)
    s.add_argument("--seed", type=int)
    s.add_argument("--grid", type=int, default=64)

    s = sub.add_parser("useminorm", help="uniformity seminorm estimates")
    common(s)
    s.add_argument("--observable", action="append", metavar="K1,..,KM:AMP")
    s.add_argument("--samples", type=int, default=10 ** 5)
    s.add_argument("--seed", type=int)
    s.add_argument("--levels", type=int, nargs="+", default=None,
                   help="H per recursion stage; one U^s row per prefix")

    s = sub.add_parser("verify", help="replay the built-in golden suite")
    common(s)

    s = sub.add_parser("catalog", help="list built-in systems")
    s.add_argument("--out", help="output file (default stdout)")
    return p


def _config_from_args(args) -> dict:
    config = {}
    if getattr(args, "config", None):
        if not os.path.exists(args.config):
            raise ConfigError("config file %r not found" % args.config)
        with open(args.config) as fh:
            try:
                config = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError("malformed config: %s" % exc)
        if not isinstance(config, dict):
            raise ConfigError("config must be a JSON object")
    for key in ("system", "observable", "lags", "samples", "seed", "grid", "k",
                "levels", "out"):
        v = getattr(args, key, None)
        if v is not None:
            config[key] = v
    if getattr(args, "params", None):
        config["params"] = _parse_params(args.params)
    return config


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _thread_cap()
        config = _config_from_args(args)
        if args.command == "structure":
            text, code = cmd_structure(config), 0
        elif args.command == "spectrum":
            text, code = cmd_spectrum(config), 0
        elif args.command == "useminorm":
            text, code = cmd_useminorm(config), 0
        elif args.command == "catalog":
            text, code = cmd_catalog(config), 0
        elif args.command == "verify":
            text, code = cmd_verify(config)
        else:  # pragma: no cover
            raise ConfigError("unknown command")
    except (ConfigError, sp.LagBudgetError) as exc:
        _sys.stderr.write("error: %s\n" % exc)
        return 1
    _emit(text, config.get("out"))
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
