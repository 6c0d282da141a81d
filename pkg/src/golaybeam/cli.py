"""
Command-line front end.

Weight files are JSON (phases in radians, row-major for rectangular
arrays); pattern and SE reports are CSV with angles in degrees.  Exit
codes: 0 success, 1 verification failed, 2 usage or file-format error,
3 best-effort result (search or solver did not converge; file written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import shlex
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import (AmplitudeTaperParams, PhaseTaperParams, amplitude_taper_weights,
                        dft_weights, phase_taper_weights)
from .errors import InvalidInputError, NotAvailableError, NotMeasurableError
from .evaluation import SectorConfig, evaluate_method
from .expansion import MODES, ExpansionStep, apply_step
from .mgda import MgdaConfig, search_with_restarts, split_phases
from .patterns import (AngleGrid, ArrayGeometry, ElementModel, array_factor_power, eirp_normalize,
                       element_gain_linear, hpbw, power_utilization, ripple)
from .sequences import (WeightPair, canonical_phases, golay_kernel, is_unimodular, max_sidelobe)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BEST_EFFORT = 0, 1, 2, 3
SEED_ENV = "GOLAYBEAM_SEED"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Weight files


@dataclass
class WeightFile:
    phases_a: np.ndarray
    phases_b: np.ndarray
    amplitudes_a: np.ndarray | None = None
    amplitudes_b: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple:
        return self.phases_a.shape

    def pair(self) -> WeightPair:
        a = np.exp(1j * self.phases_a)
        b = np.exp(1j * self.phases_b)
        if self.amplitudes_a is not None:
            a = a * self.amplitudes_a
            b = b * self.amplitudes_b
        return WeightPair(a, b)

    @classmethod
    def from_pair(cls, pair: WeightPair, metadata: dict | None = None) -> "WeightFile":
        wf = cls(canonical_phases(np.angle(pair.a)), canonical_phases(np.angle(pair.b)),
                 metadata=dict(metadata or {}))
        if not (is_unimodular(pair.a) and is_unimodular(pair.b)):
            wf.amplitudes_a = np.abs(pair.a)
            wf.amplitudes_b = np.abs(pair.b)
        return wf

    def to_json(self) -> dict:
        shape = self.shape
        n, m = (1, shape[0]) if len(shape) == 1 else shape
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "ula" if len(shape) == 1 else "ura",
            "dims": {"m": int(m), "n": int(n)},
            "phases_a": [float(x) for x in self.phases_a.ravel()],
            "phases_b": [float(x) for x in self.phases_b.ravel()],
        }
        if self.amplitudes_a is not None:
            doc["amplitudes_a"] = [float(x) for x in self.amplitudes_a.ravel()]
            doc["amplitudes_b"] = [float(x) for x in self.amplitudes_b.ravel()]
        doc["metadata"] = self.metadata
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "WeightFile":
        try:
            if doc["schema_version"] != SCHEMA_VERSION:
                raise InvalidInputError(f"unsupported schema_version {doc['schema_version']!r}")
            kind = doc["kind"]
            m, n = int(doc["dims"]["m"]), int(doc["dims"]["n"])
            if kind not in ("ula", "ura") or m < 1 or n < 1 or (kind == "ula" and n != 1):
                raise InvalidInputError(f"bad kind/dims: {kind!r}, m={m}, n={n}")
            shape = (m,) if kind == "ula" else (n, m)

            def arr(key):
                x = np.asarray(doc[key], dtype=float)
                if x.ndim != 1 or x.size != m * n or not np.all(np.isfinite(x)):
                    raise InvalidInputError(f"{key} must hold {m * n} finite numbers")
                return x.reshape(shape)

            wf = cls(arr("phases_a"), arr("phases_b"), metadata=dict(doc.get("metadata", {})))
            if ("amplitudes_a" in doc) != ("amplitudes_b" in doc):
                raise InvalidInputError("amplitudes_a and amplitudes_b must come together")
            if "amplitudes_a" in doc:
                wf.amplitudes_a, wf.amplitudes_b = arr("amplitudes_a"), arr("amplitudes_b")
            return wf
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed weight file: {exc}") from exc


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_weight_file(path, wf: WeightFile) -> None:
    atomic_write(path, json.dumps(wf.to_json(), indent=2) + "\n")


def read_weight_file(path) -> WeightFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read weight file {path}: {exc}") from exc
    return WeightFile.from_json(doc)


def _metadata(generator: str, seed=None, epsilon=None, **extra) -> dict:
    md = {
        "generator": generator,
        "seed": seed,
        "epsilon": epsilon,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "invocation": " ".join(shlex.quote(a) for a in ["golaybeam", *sys.argv[1:]]),
        "version": __version__,
    }
    md.update(extra)
    return md


# ---------------------------------------------------------------------------
# Parsing helpers


def parse_complex_list(text: str) -> np.ndarray:
    """``"j,1"`` -> [1j, 1]; rows separated by ``;`` give a 2-D array."""
    try:
        rows = [[complex(tok.strip().replace(" ", "")) for tok in row.split(",")]
                for row in text.split(";")]
    except ValueError as exc:
        raise UsageError(f"cannot parse complex list {text!r}: {exc}") from exc
    if len({len(r) for r in rows}) != 1:
        raise UsageError(f"ragged expander rows in {text!r}")
    return np.array(rows[0] if len(rows) == 1 else rows, dtype=complex)


def parse_float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _nonzero_lags(shape) -> int:
    n, m = (1, shape[0]) if len(shape) == 1 else shape
    return (2 * n - 1) * (2 * m - 1) - 1


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


# ---------------------------------------------------------------------------
# Commands


def _search_result(m, n, eps_percent, seed, restarts, overrides):
    nn = 1 if n is None else n
    cfg = MgdaConfig.from_percent(eps_percent, nn, m, seed=seed, **overrides)
    res = search_with_restarts(m, cfg, max_restarts=restarts, n=n)
    return cfg, res


def _mgda_overrides(args) -> dict:
    out = {}
    for key in ("rain_intensity", "scale_factor", "d_max", "max_iterations", "step_floor"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def cmd_search(args) -> int:
    cfg, res = _search_result(args.m, args.n, args.eps_percent, args.seed, args.restarts,
                              _mgda_overrides(args))
    shape = res.shape
    k = int(np.prod(shape))
    # keep the searched phases themselves, not a round trip through exp/angle
    pa, pb = split_phases(res.phases, shape)
    wf = WeightFile(canonical_phases(pa), canonical_phases(pb),
                    metadata=_metadata("mgda", seed=res.seed, epsilon=cfg.tolerance,
                                       eps_percent=args.eps_percent, converged=res.converged,
                                       achieved_sidelobe=res.achieved_sidelobe,
                                       iterations=res.iterations, restarts=res.restarts))
    write_weight_file(args.out, wf)
    main_lobe = 2 * k
    print(f"shape={'x'.join(map(str, shape))} converged={res.converged} "
          f"sidelobe={res.achieved_sidelobe:.6g} ({100 * res.achieved_sidelobe / main_lobe:.4g}% of {main_lobe}) "
          f"target={cfg.tolerance:.6g} seed={res.seed} restarts={res.restarts} evals={res.iterations}")
    print(f"wrote {args.out}")
    return EXIT_OK if res.converged else EXIT_BEST_EFFORT


def cmd_verify(args) -> int:
    wf = read_weight_file(args.weights)
    pair = wf.pair()
    s = max_sidelobe(pair.a, pair.b)
    ok = s <= args.eps
    bound = _nonzero_lags(pair.shape) * args.eps
    print(f"shape={'x'.join(map(str, pair.shape))} max_sidelobe={s:.6g} eps={args.eps:g} "
          f"{'PASS' if ok else 'FAIL'} ripple_bound={bound:.6g} unimodular={pair.is_unimodular()}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_expand(args) -> int:
    wf = read_weight_file(args.weights)
    u = parse_complex_list(args.expander_u)
    v = parse_complex_list(args.expander_v)
    out = _expand(wf.pair(), args.mode, u, v)
    s = max_sidelobe(out.a, out.b)
    md = _metadata("expand", mode=args.mode, expander_u=args.expander_u, expander_v=args.expander_v,
                   source=str(args.weights), max_sidelobe=s)
    write_weight_file(args.out, WeightFile.from_pair(out, md))
    print(f"shape={'x'.join(map(str, out.shape))} max_sidelobe={s:.6g}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _expand(pair: WeightPair, mode: str, u, v) -> WeightPair:
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}; expected one of {MODES}")
    return apply_step(pair, ExpansionStep(mode, u, v))


def _element_model(args) -> ElementModel:
    if args.no_element:
        return ElementModel.isotropic()
    return ElementModel(peak_db=args.element_peak_db, phi0=np.deg2rad(args.element_phi0),
                        hpbw=np.deg2rad(args.element_hpbw))


def pattern_csv(pair: WeightPair, geometry: ArrayGeometry, model: ElementModel, grid: AngleGrid) -> str:
    af = array_factor_power(pair, geometry, grid).values
    th, ph = np.meshgrid(grid.theta, grid.phi, indexing="ij")
    g0 = element_gain_linear(model, ph, th)
    eirp = array_factor_power(eirp_normalize(pair), geometry, grid).values * g0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["phi_deg", "theta_deg", "af_power_db", "total_db", "eirp_dbw"])
    with np.errstate(divide="ignore"):
        cols = [np.rad2deg(ph), np.rad2deg(th), 10 * np.log10(af), 10 * np.log10(af * g0),
                10 * np.log10(eirp)]
    # -inf (exact nulls) is clamped to a finite floor so every CSV value is finite
    cols = [np.maximum(c, -400.0) for c in cols]
    for row in zip(*(c.ravel() for c in cols)):
        w.writerow([f"{x:.6f}" for x in row])
    return buf.getvalue()


def cmd_pattern(args) -> int:
    wf = read_weight_file(args.weights)
    pair = wf.pair()
    geometry = ArrayGeometry.for_weights(pair, dy=args.dy, dz=args.dz)
    model = _element_model(args)
    if pair.is_2d:
        grid = AngleGrid.hemisphere(args.step if args.step else 1.0)
    else:
        grid = AngleGrid.azimuth_cut(args.step if args.step else 0.25)
    if args.out:
        atomic_write(args.out, pattern_csv(pair, geometry, model, grid))
    cut = AngleGrid.azimuth_cut(0.25)
    af_cut = array_factor_power(pair, geometry, cut)
    total_cut = af_cut.values * element_gain_linear(model, cut.phi)
    sector = (-np.deg2rad(args.sector), np.deg2rad(args.sector))
    try:
        width = f"{hpbw((cut.phi, total_cut[0])):.3f}"
    except NotMeasurableError:
        width = "n/a"
    if pair.is_2d:
        af = array_factor_power(pair, geometry, grid)
        rip = ripple(af, sector)
    else:
        rip = ripple(af_cut, sector)
    print(f"hpbw_deg={width} af_ripple_db={rip:.6g} power_utilization={power_utilization(pair):.6g}")
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = SectorConfig(half_width_deg=args.half_width, r_min=args.r_min, r_max=args.r_max,
                       drops=args.drops, pathloss_exp=args.pathloss_exp, offset_db=args.offset_db,
                       snr_db=parse_float_list(args.snr_grid), seed=args.seed)
    model = _element_model(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "snr_db", "mean_se_bps_hz"])
    for path in args.weights:
        wf = read_weight_file(path)
        pair = wf.pair()
        geometry = ArrayGeometry.for_weights(pair, dy=args.dy, dz=args.dz)
        label = wf.metadata.get("label") or Path(path).stem
        rep = evaluate_method(pair, geometry, model, cfg, label)
        for row in rep.rows():
            w.writerow([row[0], f"{row[1]:g}", f"{row[2]:.6f}"])
    text = buf.getvalue()
    if args.out:
        atomic_write(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_baseline(args) -> int:
    phi0 = np.deg2rad(args.phi0)
    geometry = ArrayGeometry(args.m, dy=args.dy)
    status = EXIT_OK
    if args.method == "dft":
        pair = dft_weights(args.m, phi0, geometry)
        md = _metadata("dft", phi0_deg=args.phi0, dy=args.dy, label="dft")
    elif args.method == "phase-taper":
        params = PhaseTaperParams(args.p, args.c)
        pair = phase_taper_weights(args.m, phi0, params, geometry)
        md = _metadata("phase-taper", phi0_deg=args.phi0, p=args.p, c=args.c, dy=args.dy,
                       label="phase-taper")
    else:
        params = AmplitudeTaperParams(zeta=args.zeta, seed=args.seed, starts=args.starts)
        res = amplitude_taper_weights(args.m, params, geometry)
        pair = res.weights
        md = _metadata("amp-taper", seed=args.seed, zeta=args.zeta, dy=args.dy, converged=res.converged,
                       deviation=res.deviation, papr=res.papr, label="amp-taper")
        print(f"converged={res.converged} deviation={res.deviation:.4g} papr={res.papr:.4g}")
        if not res.converged:
            status = EXIT_BEST_EFFORT
    write_weight_file(args.out, WeightFile.from_pair(pair, md))
    print(f"power_utilization={power_utilization(pair):.6g}")
    print(f"wrote {args.out}")
    return status


def run_recipe(recipe: dict, base_dir: Path = Path(".")) -> tuple[WeightPair, dict, bool]:
    """Execute a recipe document; returns the final pair, provenance and convergence."""
    steps = recipe.get("steps")
    if not isinstance(steps, list) or not steps:
        raise InvalidInputError("recipe needs a non-empty 'steps' list")
    pair, converged, log = None, True, []
    for i, step in enumerate(steps):
        if not isinstance(step, dict) or len(step) != 1:
            raise InvalidInputError(f"step {i} must be an object with exactly one key")
        (op, spec), = step.items()
        if op == "search":
            _, res = _search_result(int(spec["m"]), spec.get("n"), float(spec.get("eps_percent", 1.0)),
                                    int(spec.get("seed", 0)), int(spec.get("restarts", 10)), {})
            pair, converged = res.pair(), converged and res.converged
            log.append({"search": dict(spec), "converged": res.converged,
                        "achieved_sidelobe": res.achieved_sidelobe, "seed": res.seed})
        elif op == "load":
            pair = read_weight_file(base_dir / spec).pair()
            log.append({"load": spec})
        elif op == "kernel":
            pair = WeightPair(*golay_kernel(int(spec)))
            log.append({"kernel": int(spec)})
        elif op == "expand":
            if pair is None:
                raise InvalidInputError("expand step before any source step")
            u = spec["u"]
            v = spec["v"]
            u = parse_complex_list(u) if isinstance(u, str) else np.asarray(u, dtype=complex)
            v = parse_complex_list(v) if isinstance(v, str) else np.asarray(v, dtype=complex)
            pair = _expand(pair, spec["mode"], u, v)
            log.append({"expand": {k: str(x) for k, x in spec.items()}, "shape": list(pair.shape)})
        else:
            raise InvalidInputError(f"unknown recipe step {op!r}")
    return pair, {"steps": log}, converged


def cmd_recipe(args) -> int:
    path = Path(args.recipe)
    try:
        recipe = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read recipe {path}: {exc}") from exc
    pair, log, converged = run_recipe(recipe, path.parent)
    s = max_sidelobe(pair.a, pair.b)
    out = args.out or recipe.get("out")
    if not out:
        raise UsageError("no output path: pass --out or set 'out' in the recipe")
    write_weight_file(out, WeightFile.from_pair(pair, _metadata("recipe", recipe=str(path),
                                                                max_sidelobe=s, **log)))
    print(f"shape={'x'.join(map(str, pair.shape))} max_sidelobe={s:.6g} converged={converged}")
    print(f"wrote {out}")
    return EXIT_OK if converged else EXIT_BEST_EFFORT


# ---------------------------------------------------------------------------
# Argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_element_flags(p):
    p.add_argument("--no-element", action="store_true", help="isotropic elements")
    p.add_argument("--element-peak-db", type=float, default=8.0)
    p.add_argument("--element-phi0", type=float, default=0.0, help="element pointing (deg)")
    p.add_argument("--element-hpbw", type=float, default=90.0, help="element HPBW (deg)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="golaybeam", description="Broad-beam weight design for dual-polarized arrays.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("search", help="search for an eps-complementary pair")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, default=None, help="rows; gives a 2-D array search")
    s.add_argument("--eps-percent", type=float, default=1.0, help="tolerance in percent of the main lobe 2NM")
    s.add_argument("--seed", type=int, default=_default_seed())
    s.add_argument("--restarts", type=int, default=10)
    s.add_argument("--rain", dest="rain_intensity", type=float, default=None)
    s.add_argument("--scale-factor", type=float, default=None)
    s.add_argument("--d-max", type=int, default=None)
    s.add_argument("--max-iterations", type=int, default=None)
    s.add_argument("--step-floor", type=float, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", help="check complementarity of a weight file")
    v.add_argument("weights")
    v.add_argument("--eps", type=float, default=1e-9)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", help="enlarge a weight file with expanders")
    e.add_argument("weights")
    e.add_argument("--expander-u", required=True, help='e.g. "j,1" or "1,1;1,-1" for 2-D')
    e.add_argument("--expander-v", required=True)
    e.add_argument("--mode", required=True, choices=MODES)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_expand)

    pt = sub.add_parser("pattern", help="evaluate the radiation pattern")
    pt.add_argument("weights")
    pt.add_argument("--dy", type=float, default=0.5)
    pt.add_argument("--dz", type=float, default=0.5)
    pt.add_argument("--step", type=float, default=None, help="grid step in degrees")
    pt.add_argument("--sector", type=float, default=60.0, help="half-width (deg) for the ripple metric")
    pt.add_argument("--out", default=None, help="CSV output")
    _add_element_flags(pt)
    pt.set_defaults(func=cmd_pattern)

    ev = sub.add_parser("evaluate", help="sector spectral-efficiency evaluation")
    ev.add_argument("weights", nargs="+")
    ev.add_argument("--drops", type=int, default=10_000)
    ev.add_argument("--seed", type=int, default=_default_seed())
    ev.add_argument("--snr-grid", default="-10,0,10,20,30")
    ev.add_argument("--half-width", type=float, default=60.0)
    ev.add_argument("--r-min", type=float, default=25.0)
    ev.add_argument("--r-max", type=float, default=300.0)
    ev.add_argument("--pathloss-exp", type=float, default=2.2)
    ev.add_argument("--offset-db", type=float, default=57.0)
    ev.add_argument("--dy", type=float, default=0.5)
    ev.add_argument("--dz", type=float, default=0.5)
    ev.add_argument("--out", default=None)
    _add_element_flags(ev)
    ev.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("baseline", help="reference beamformer weights")
    b.add_argument("--method", required=True, choices=("dft", "phase-taper", "amp-taper"))
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--phi0", type=float, default=0.0, help="steering azimuth (deg)")
    b.add_argument("--dy", type=float, default=0.5)
    b.add_argument("--p", type=int, default=3)
    b.add_argument("--c", type=float, default=24.0)
    b.add_argument("--zeta", type=float, default=0.01)
    b.add_argument("--starts", type=int, default=50)
    b.add_argument("--seed", type=int, default=_default_seed())
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_baseline)

    r = sub.add_parser("recipe", help="run a multi-step construction from a JSON recipe")
    r.add_argument("recipe")
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_recipe)
    return p


_VALUE_FLAGS = ("--expander-u", "--expander-v", "--snr-grid")


def _join_values(argv):
    # values such as "-1,-j" would otherwise be taken for options
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"golaybeam: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInputError, NotAvailableError) as exc:
        print(f"golaybeam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
