"""Command line front end: means and star curves, growth fits, verification.

Config files are flat key=value text; command-line flags win over config
entries. All file writes go through a temp-then-rename step so partially
written outputs never appear under the final name.

Exit codes: 0 success, 1 verification violations, 2 usage errors,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from .analytic import CATALOG_NAMES, DomainError, NonConvergenceError, catalog
from .csvio import join_row, parse_rows
from .harmonic import build_corpus, corpus_shear
from .means import MeansCurve, integral_means
from .star import StarFunction, sample_log_modulus, star_function, star_grid_size
from .svgplot import polyline_svg
from .verify import DEFAULT_DEPTH, K_GRID, REL_TOL, SUITES, hardy_membership_verdict, run_suite

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

OUT_ENV = "HQMAPS_OUT"

GROWTH_CSV_HEADER = (
    "mapping_id,p,beta,beta_pp,verdict,"
    "threshold_theorem,threshold_nowak,threshold_astala_koskela"
)


class UsageError(ValueError):
    """Malformed invocation; reported on one line and mapped to exit 2."""


# ---------------------------------------------------------------------------
# value parsing shared by flags and config entries


def _float_list(text: str) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"malformed number list {text!r}")
    if not vals:
        raise UsageError(f"empty number list {text!r}")
    return vals


def _formats(text: str) -> list:
    out = []
    for fmt in text.split(","):
        fmt = fmt.strip()
        if not fmt:
            continue
        if fmt not in ("csv", "json", "svg"):
            raise UsageError(f"unknown format {fmt!r}; choose from csv, json, svg")
        out.append(fmt)
    if not out:
        raise UsageError("empty format list")
    return out


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"malformed boolean {text!r}")


_OPTION_TYPES = {
    "catalog": str,
    "corpus": str,
    "shear": str,
    "k": float,
    "p": _float_list,
    "r": _float_list,
    "n": int,
    "depth": int,
    "suite": str,
    "class": str,
    "K": _float_list,
    "tol": float,
    "out": str,
    "formats": _formats,
    "stamp": _bool,
}

_COMMAND_KEYS = {
    "means": ("catalog", "corpus", "shear", "k", "p", "r", "out", "formats"),
    "star": ("catalog", "corpus", "shear", "k", "r", "n", "out", "formats"),
    "growth": ("corpus", "shear", "p", "depth", "out", "formats"),
    "verify": ("suite", "class", "K", "tol", "depth", "out", "stamp"),
}


def _load_config(path: str) -> dict:
    entries = {}
    try:
        fh = open(path)
    except OSError as e:
        raise UsageError(f"cannot read config {path!r}: {e}")
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            entries[key.strip()] = value.strip()
    return entries


def _apply_config(ns: argparse.Namespace, command: str) -> None:
    """Fill unset flags from the config file; reject keys the command lacks."""
    if not ns.config:
        return
    allowed = _COMMAND_KEYS[command]
    for key, raw in _load_config(ns.config).items():
        if key not in allowed:
            raise UsageError(f"unknown config key {key!r} for command {command!r}")
        dest = "cls" if key == "class" else key
        if getattr(ns, dest) is not None:
            continue  # explicit flag wins
        try:
            setattr(ns, dest, _OPTION_TYPES[key](raw))
        except UsageError as e:
            raise UsageError(f"config key {key!r}: {e}")
        except (TypeError, ValueError):
            raise UsageError(f"config key {key!r}: malformed value {raw!r}")


# ---------------------------------------------------------------------------
# output plumbing


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_") or "target"


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path: str) -> tuple:
    """(header, rows) with numeric fields parsed; the round-trip reader."""
    with open(path) as fh:
        parsed = parse_rows(fh.read())
    if not parsed:
        raise UsageError(f"{path}: empty CSV")
    header, rows = parsed[0], []
    for line in parsed[1:]:
        row = []
        for fieldtext in line:
            try:
                row.append(float(fieldtext))
            except ValueError:
                row.append(fieldtext)
        rows.append(row)
    return header, rows


# ---------------------------------------------------------------------------
# target selection


_OMEGA_RE = re.compile(r"^([0-9][0-9.eE+-]*)z(\^2)?$")


def parse_shear_spec(spec: str):
    """phi=identity|halfplane|strip with omega=<coeff>z or <coeff>z^2."""
    fields = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"shear spec parts are key=value, got {part!r}")
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in ("phi", "omega"):
            raise UsageError(f"unknown shear key {key!r}")
        fields[key] = value.strip()
    if set(fields) != {"phi", "omega"}:
        raise UsageError("shear spec needs both phi= and omega=")
    m = _OMEGA_RE.match(fields["omega"])
    if m is None:
        raise UsageError(
            f"omega must look like 0.5z or 0.5z^2, got {fields['omega']!r}"
        )
    return corpus_shear(fields["phi"], float(m.group(1)), 2 if m.group(2) else 1)


def _resolve_target(ns: argparse.Namespace, allow_catalog: bool = True):
    picked = [
        name
        for name in ("catalog", "corpus", "shear")
        if getattr(ns, name, None) is not None
    ]
    if len(picked) != 1:
        wanted = "--catalog, --corpus, or --shear" if allow_catalog else "--corpus or --shear"
        raise UsageError(f"choose exactly one target: {wanted}")
    if picked[0] == "catalog":
        if not allow_catalog:
            raise UsageError("this command takes --corpus or --shear targets")
        if ns.catalog not in CATALOG_NAMES:
            raise UsageError(
                f"unknown catalog entry {ns.catalog!r}; choose from "
                + ", ".join(CATALOG_NAMES)
            )
        return catalog(ns.catalog, ns.k if ns.k is not None else 0.0)
    if picked[0] == "shear":
        return parse_shear_spec(ns.shear)
    members = {f.uid: f for f in build_corpus()}
    if ns.corpus not in members:
        raise UsageError(
            f"unknown corpus id {ns.corpus!r}; available: " + ", ".join(sorted(members))
        )
    return members[ns.corpus]


def _check_p(p_list) -> list:
    for p in p_list:
        if not (0.0 < p < float("inf")):
            raise UsageError(f"p must be positive and finite, got {p:g}")
    return p_list


def _check_r(r_list) -> list:
    for r in r_list:
        if not (0.0 < r < 1.0):
            raise UsageError(f"r must lie in (0, 1), got {r:g}")
    return sorted(set(r_list))


# ---------------------------------------------------------------------------
# commands


def cmd_means(ns: argparse.Namespace) -> int:
    p_list = _check_p(ns.p if ns.p is not None else [2.0])
    if ns.r is None:
        raise UsageError("means needs --r (comma-separated radii)")
    r_list = _check_r(ns.r)
    target = _resolve_target(ns)
    uid = target.uid
    lines = [MeansCurve.csv_header()]
    curves_doc = []
    series = []
    for p in p_list:
        values = [integral_means(target, p, r) for r in r_list]
        curve = MeansCurve(
            p=p, radii=np.array(r_list), values=np.array(values), target=uid
        )
        lines += curve.csv_rows()
        curves_doc.append({"p": p, "r": list(r_list), "value": values})
        series.append((f"p={p:g}", list(r_list), values))
        for r, v in zip(r_list, values):
            print(f"{uid} p={p:g} r={r:g}: M_p = {v:.9g}")
    base = os.path.join(ns.out, f"means_{_slug(uid)}")
    if "csv" in ns.formats:
        _write_atomic(base + ".csv", "\n".join(lines) + "\n")
    if "json" in ns.formats:
        _write_atomic(
            base + ".json",
            json.dumps({"target": uid, "curves": curves_doc}, sort_keys=True, indent=2)
            + "\n",
        )
    if "svg" in ns.formats:
        _write_atomic(
            base + ".svg",
            polyline_svg(
                series,
                title=f"integral means of {uid}",
                xlabel="r",
                ylabel="M_p(r)",
                logy=True,
            ),
        )
    return EXIT_OK


def cmd_star(ns: argparse.Namespace) -> int:
    if ns.r is None:
        raise UsageError("star needs --r (comma-separated radii)")
    r_list = _check_r(ns.r)
    target = _resolve_target(ns)
    uid = target.uid
    lines = [StarFunction.csv_header()]
    doc = []
    series = []
    for r in r_list:
        n = ns.n if ns.n is not None else star_grid_size(r)
        sf = star_function(sample_log_modulus(target, r, n))
        lines += sf.csv_rows()
        doc.append(
            {"r": r, "n": n, "theta": sf.thetas.tolist(), "value": sf.values.tolist()}
        )
        series.append((f"r={r:g}", sf.thetas.tolist(), sf.values.tolist()))
        print(
            f"{uid} r={r:g}: star peak = {float(np.max(sf.values)):.9g}, "
            f"full mass = {sf.values[-1]:.9g}"
        )
    base = os.path.join(ns.out, f"star_{_slug(uid)}")
    if "csv" in ns.formats:
        _write_atomic(base + ".csv", "\n".join(lines) + "\n")
    if "json" in ns.formats:
        _write_atomic(
            base + ".json",
            json.dumps({"target": uid, "curves": doc}, sort_keys=True, indent=2) + "\n",
        )
    if "svg" in ns.formats:
        _write_atomic(
            base + ".svg",
            polyline_svg(
                series,
                title=f"star function of log|{uid}|",
                xlabel="theta",
                ylabel="cumulative rearranged mass",
            ),
        )
    return EXIT_OK


def _fmt_threshold(value) -> str:
    return "" if value is None else f"{value:.12g}"


def cmd_growth(ns: argparse.Namespace) -> int:
    p_list = _check_p(ns.p if ns.p is not None else [0.5])
    depth = ns.depth if ns.depth is not None else 12
    if depth < 6:
        raise UsageError(f"growth needs dyadic depth >= 6, got {depth}")
    f = _resolve_target(ns, allow_catalog=False)
    lines = [GROWTH_CSV_HEADER]
    doc = []
    series = []
    for p in p_list:
        v = hardy_membership_verdict(f, p, depth)
        thr = v.thresholds
        lines.append(
            join_row(
                [
                    v.mapping_id,
                    f"{p:.12g}",
                    f"{v.beta:.12g}",
                    f"{v.beta_pp:.12g}",
                    v.verdict,
                    _fmt_threshold(thr["theorem"]),
                    _fmt_threshold(thr["nowak"]),
                    _fmt_threshold(thr["astala_koskela"]),
                ]
            )
        )
        doc.append(
            {
                "mapping_id": v.mapping_id,
                "p": p,
                "beta": v.beta,
                "beta_pp": v.beta_pp,
                "verdict": v.verdict,
                "thresholds": thr,
            }
        )
        mask = (
            v.curve.converged
            if v.curve.converged is not None
            else np.ones(v.curve.radii.size, dtype=bool)
        )
        series.append(
            (
                f"p={p:g}",
                (1.0 / (1.0 - v.curve.radii[mask])).tolist(),
                v.curve.values[mask].tolist(),
            )
        )
        print(
            f"{v.mapping_id} p={p:g}: {v.verdict} (beta = {v.beta:.4f}, "
            f"theorem threshold {_fmt_threshold(thr['theorem']) or 'n/a'}, "
            f"earlier bound {_fmt_threshold(thr['nowak']) or 'n/a'}, "
            f"distortion-only {_fmt_threshold(thr['astala_koskela']) or 'n/a'})"
        )
    base = os.path.join(ns.out, f"growth_{_slug(f.uid)}")
    if "csv" in ns.formats:
        _write_atomic(base + ".csv", "\n".join(lines) + "\n")
    if "json" in ns.formats:
        _write_atomic(
            base + ".json",
            json.dumps({"target": f.uid, "rows": doc}, sort_keys=True, indent=2) + "\n",
        )
    if "svg" in ns.formats:
        _write_atomic(
            base + ".svg",
            polyline_svg(
                series,
                title=f"dyadic means growth of {f.uid}",
                xlabel="1/(1-r)",
                ylabel="M_p(r)",
                logx=True,
                logy=True,
            ),
        )
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    suite = ns.suite if ns.suite is not None else "all"
    if suite not in SUITES + ("all",):
        raise UsageError(
            f"unknown suite {suite!r}; choose from " + ", ".join(SUITES + ("all",))
        )
    K_grid = tuple(ns.K) if ns.K is not None else K_GRID
    for K in K_grid:
        if K < 1.0:
            raise UsageError(f"K must be >= 1, got {K:g}")
    report = run_suite(
        suite,
        K_grid=K_grid,
        tol=ns.tol if ns.tol is not None else REL_TOL,
        depth=ns.depth if ns.depth is not None else DEFAULT_DEPTH,
        class_filter=ns.cls,
    )
    if ns.stamp:
        report.metadata["timestamp"] = datetime.now(timezone.utc).isoformat()
    base = os.path.join(ns.out, "verify_report")
    _write_atomic(base + ".json", report.to_json())
    _write_atomic(base + ".csv", report.to_csv())
    failures = report.failures
    print(
        f"{len(report.rows)} rows, {len(failures)} violations -> {base}.json, {base}.csv"
    )
    for row in failures[:20]:
        print("FAIL " + row.csv_line())
    return report.exit_status()


# ---------------------------------------------------------------------------
# parser


def _add_target_flags(sub, with_catalog: bool = True):
    if with_catalog:
        sub.add_argument("--catalog", help="catalog function name")
        sub.add_argument("--k", type=float, help="parameter k for the extremal family")
    sub.add_argument("--corpus", help="built-in corpus member id")
    sub.add_argument("--shear", help='shear spec, e.g. "phi=halfplane,omega=0.5z"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hqmaps",
        description="harmonic quasiconformal mapping toolkit: integral means, "
        "star functions, extremal verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    means = sub.add_parser("means", help="integral means along radii")
    _add_target_flags(means)
    means.add_argument("--p", type=_float_list, help="comma-separated exponents")
    means.add_argument("--r", type=_float_list, help="comma-separated radii in (0,1)")
    means.set_defaults(func=cmd_means)

    star = sub.add_parser("star", help="star function of log-modulus on a circle")
    _add_target_flags(star)
    star.add_argument("--r", type=_float_list, help="comma-separated radii in (0,1)")
    star.add_argument("--n", type=int, help="samples per circle (power of two)")
    star.set_defaults(func=cmd_star)

    growth = sub.add_parser("growth", help="dyadic growth fit and membership verdict")
    _add_target_flags(growth, with_catalog=False)
    growth.add_argument("--p", type=_float_list, help="comma-separated exponents")
    growth.add_argument("--depth", type=int, help="dyadic depth (>= 6)")
    growth.set_defaults(func=cmd_growth, catalog=None, k=None)

    verify = sub.add_parser("verify", help="run the inequality suites")
    verify.add_argument("--suite", help="one of " + ", ".join(SUITES + ("all",)))
    verify.add_argument("--class", dest="cls", help="corpus filter: convex or ctc")
    verify.add_argument("--K", type=_float_list, help="comma-separated K grid")
    verify.add_argument("--tol", type=float, help="relative inequality tolerance")
    verify.add_argument("--depth", type=int, help="dyadic depth for membership rows")
    verify.add_argument(
        "--stamp",
        action="store_const",
        const=True,
        help="record a wall-clock timestamp (breaks byte determinism)",
    )
    verify.set_defaults(func=cmd_verify)

    for sp in (means, star, growth, verify):
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument("--out", help="output directory (default: $HQMAPS_OUT or .)")
        sp.add_argument(
            "--formats", type=_formats, help="comma-separated subset of csv,json,svg"
        )
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config(ns, ns.command)
        ns.out = ns.out or os.environ.get(OUT_ENV) or "."
        if getattr(ns, "formats", None) is None:
            ns.formats = ["csv"]
        if getattr(ns, "stamp", None) is None:
            ns.stamp = False
        return ns.func(ns)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
