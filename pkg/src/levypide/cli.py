"""Command-line front end: parse run configurations, execute pricing jobs,
emit price tables and plot-ready data files.

Config files are JSON.  Top-level keys:

  option    {"kind", "strike", "expiry", "sigma", ["rate"]}; rate here is a
            default only, each scenario supplies its own.
  model     {"type": "none"|"merton"|"kou"|"vg"|"nig"|"cgmy", ...params}, or
            null for no jumps.  "vg" accepts either the density parameters
            (a, b, c) or the time-changed-diffusion ones (theta, kappa,
            sigma_vg).
  grid      {"half_width", "n_space", "n_time", ["z_max"], ["delta"]}.
  style     "european" (default) or "american".
  penalty   {"epsilon", "max_picard", "picard_tol"}; american style only.
  outputs   [{"kind": "table"|"surface"|"boundary"|"plotdata", "path": ...}].
  scenarios [{"rate": r, "spots": [S, ...]}]; one pricing job per entry.
  seed      reserved for sampling-based outputs; the deterministic solves
            ignore it.
  closed_form  replace the solve by the closed form when the model has no
            jumps (also the --closed-form flag).

Scenario jobs run concurrently; LEVYPIDE_WORKERS caps the thread count.  All
files are written by the main thread after every job has finished, so
identical configs produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .american import (
    PenaltyConfig,
    extract_boundary,
    solve_american_penalized,
)
from .bs import OptionSpec, bs_price, payoff
from .levy import (
    CGMY,
    NIG,
    Kou,
    LevyModel,
    Merton,
    NoJumps,
    VarianceGamma,
    integrability_check,
    shape_witness,
    structural_condition_check,
)
from .pide import GridSpec, PriceSurface, price_at, solve_european

__all__ = [
    "ConfigError",
    "OutputSpec",
    "Scenario",
    "RunConfig",
    "model_from_dict",
    "model_to_dict",
    "emit_plotdata",
    "run",
    "check",
    "main",
]

_OUTPUT_KINDS = ("table", "surface", "boundary", "plotdata")
_MODEL_NAMES = ("none", "merton", "kou", "vg", "nig", "cgmy")
# Figure-style column ordering; extra labels follow in the order given.
_CANONICAL_COLUMNS = ("bs", "vg", "merton")
_TABLE1_SPOTS = (85.2144, 88.692, 92.3116, 96.0789, 100.0, 104.081, 108.329, 112.75)


class ConfigError(ValueError):
    """Configuration does not parse or validate; the message is one line."""


def _fmt9(v: float) -> str:
    """Shortest decimal that round-trips, capped at 9 significant digits."""
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return np.format_float_positional(
        float(v), precision=9, unique=True, fractional=False, trim="-"
    )


def _max_workers() -> int | None:
    raw = os.environ.get("LEVYPIDE_WORKERS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"LEVYPIDE_WORKERS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"LEVYPIDE_WORKERS must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# model (de)serialization


def model_from_dict(d) -> LevyModel:
    if d is None:
        return NoJumps()
    if isinstance(d, str):
        d = {"type": d}
    if not isinstance(d, Mapping):
        raise ConfigError(f"model must be an object or a name, got {type(d).__name__}")
    kind = str(d.get("type", "")).lower()
    params = {k: d[k] for k in d if k != "type"}
    try:
        if kind in ("none", "nojumps", "bs"):
            if params:
                raise ConfigError(f"model 'none' takes no parameters, got {sorted(params)}")
            return NoJumps()
        if kind == "merton":
            return Merton(**_floats(params, ("lam", "m", "delta"), kind))
        if kind == "kou":
            return Kou(**_floats(params, ("lam", "theta", "lam_plus", "lam_minus"), kind))
        if kind in ("vg", "variance_gamma"):
            keys = frozenset(params)
            if keys == {"a", "b", "c"}:
                return VarianceGamma(**_floats(params, ("a", "b", "c"), kind))
            if keys == {"theta", "kappa", "sigma_vg"}:
                return VarianceGamma.from_bm_params(
                    **_floats(params, ("theta", "kappa", "sigma_vg"), kind)
                )
            raise ConfigError(
                "vg model takes either (a, b, c) or (theta, kappa, sigma_vg), "
                f"got {sorted(params)}"
            )
        if kind == "nig":
            return NIG(**_floats(params, ("a", "b", "c"), kind))
        if kind == "cgmy":
            return CGMY(**_floats(params, ("c", "g", "m", "y"), kind))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid {kind} parameters: {exc}") from exc
    raise ConfigError(f"unknown model: {kind!r} (expected one of {', '.join(_MODEL_NAMES)})")


def _floats(params: Mapping, names: tuple[str, ...], kind: str) -> dict[str, float]:
    if frozenset(params) != frozenset(names):
        raise ConfigError(
            f"{kind} model needs exactly the parameters {list(names)}, got {sorted(params)}"
        )
    return {k: float(params[k]) for k in names}


def model_to_dict(model: LevyModel) -> dict:
    """Canonical serialized form; VG always emits density parameters (a, b, c)."""
    if isinstance(model, NoJumps):
        return {"type": "none"}
    if isinstance(model, Merton):
        return {"type": "merton", "lam": model.lam, "m": model.m, "delta": model.delta}
    if isinstance(model, Kou):
        return {
            "type": "kou",
            "lam": model.lam,
            "theta": model.theta,
            "lam_plus": model.lam_plus,
            "lam_minus": model.lam_minus,
        }
    if isinstance(model, VarianceGamma):
        return {"type": "vg", "a": model.a, "b": model.b, "c": model.c}
    if isinstance(model, NIG):
        return {"type": "nig", "a": model.a, "b": model.b, "c": model.c}
    if isinstance(model, CGMY):
        return {"type": "cgmy", "c": model.c, "g": model.g, "m": model.m, "y": model.y}
    raise TypeError(f"cannot serialize {type(model).__name__}")


# ---------------------------------------------------------------------------
# run configuration


@dataclass(frozen=True)
class OutputSpec:
    kind: str
    path: str


@dataclass(frozen=True)
class Scenario:
    rate: float
    spots: tuple[float, ...]


@dataclass(frozen=True)
class RunConfig:
    option: OptionSpec
    model: LevyModel
    grid: GridSpec
    style: str = "european"
    penalty: PenaltyConfig | None = None
    outputs: tuple[OutputSpec, ...] = ()
    scenarios: tuple[Scenario, ...] = ()
    seed: int = 0
    closed_form: bool = False

    @classmethod
    def from_dict(cls, d: Mapping) -> "RunConfig":
        if not isinstance(d, Mapping):
            raise ConfigError(f"config root must be an object, got {type(d).__name__}")
        try:
            opt = d["option"]
            option = OptionSpec(
                strike=float(opt["strike"]),
                expiry=float(opt["expiry"]),
                rate=float(opt.get("rate", 0.0)),
                sigma=float(opt["sigma"]),
                kind=str(opt.get("kind", "put")),
            )
        except KeyError as exc:
            raise ConfigError(f"option section is missing field {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid option section: {exc}") from exc

        model = model_from_dict(d.get("model"))

        g = d.get("grid", {})
        try:
            grid = GridSpec(
                half_width=float(g.get("half_width", 4.0)),
                n_space=int(g.get("n_space", 400)),
                n_time=int(g.get("n_time", 200)),
                z_max=None if g.get("z_max") is None else float(g["z_max"]),
                delta=None if g.get("delta") is None else float(g["delta"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"inconsistent grid: {exc}") from exc

        style = str(d.get("style", "european"))
        if style not in ("european", "american"):
            raise ConfigError(f"style must be 'european' or 'american', got {style!r}")

        penalty = None
        if d.get("penalty") is not None:
            p = d["penalty"]
            try:
                penalty = PenaltyConfig(
                    epsilon=float(p.get("epsilon", 1e-3)),
                    max_picard=int(p.get("max_picard", 50)),
                    picard_tol=None if p.get("picard_tol") is None else float(p["picard_tol"]),
                )
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"invalid penalty section: {exc}") from exc

        outputs = []
        for o in d.get("outputs", ()):
            try:
                outputs.append(OutputSpec(kind=str(o["kind"]), path=str(o["path"])))
            except (KeyError, TypeError) as exc:
                raise ConfigError(f"each output needs 'kind' and 'path': {o!r}") from exc

        scenarios = []
        for s in d.get("scenarios", ()):
            try:
                scenarios.append(
                    Scenario(rate=float(s["rate"]), spots=tuple(float(x) for x in s["spots"]))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"each scenario needs 'rate' and 'spots': {s!r}") from exc

        cfg = cls(
            option=option,
            model=model,
            grid=grid,
            style=style,
            penalty=penalty,
            outputs=tuple(outputs),
            scenarios=tuple(scenarios),
            seed=int(d.get("seed", 0)),
            closed_form=bool(d.get("closed_form", False)),
        )
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        opt = self.option
        d = {
            "option": {
                "kind": opt.kind,
                "strike": opt.strike,
                "expiry": opt.expiry,
                "rate": opt.rate,
                "sigma": opt.sigma,
            },
            "model": model_to_dict(self.model),
            "grid": {
                "half_width": self.grid.half_width,
                "n_space": self.grid.n_space,
                "n_time": self.grid.n_time,
                "z_max": self.grid.z_max,
                "delta": self.grid.delta,
            },
            "style": self.style,
            "outputs": [{"kind": o.kind, "path": o.path} for o in self.outputs],
            "scenarios": [{"rate": s.rate, "spots": list(s.spots)} for s in self.scenarios],
            "seed": self.seed,
            "closed_form": self.closed_form,
        }
        if self.penalty is not None:
            d["penalty"] = {
                "epsilon": self.penalty.epsilon,
                "max_picard": self.penalty.max_picard,
                "picard_tol": self.penalty.picard_tol,
            }
        return d

    def validate(self) -> None:
        if not self.scenarios:
            raise ConfigError("scenario list is empty; nothing to price")
        K, L = self.option.strike, self.grid.half_width
        lo, hi = K * math.exp(-L), K * math.exp(L)
        for sc in self.scenarios:
            if not sc.spots:
                raise ConfigError(f"scenario r={sc.rate:g} has an empty spot list")
            for s in sc.spots:
                if not (lo <= s <= hi):
                    raise ConfigError(
                        f"scenario spot S={s:g} outside the grid range [{lo:.4g}, {hi:.4g}]"
                    )
        if self.style == "american" and self.option.kind != "put":
            raise ConfigError("american style covers put options only")
        substitute = self.closed_form and isinstance(self.model, NoJumps)
        for o in self.outputs:
            if o.kind not in _OUTPUT_KINDS:
                raise ConfigError(
                    f"unknown output kind {o.kind!r} (expected one of {', '.join(_OUTPUT_KINDS)})"
                )
            if o.kind == "boundary" and self.style != "american":
                raise ConfigError("boundary output requires style: american")
            if substitute and o.kind in ("surface", "boundary"):
                raise ConfigError(
                    f"{o.kind} output needs the grid solve; drop closed_form"
                )
            parent = os.path.dirname(os.path.abspath(o.path))
            if not (os.path.isdir(parent) and os.access(parent, os.W_OK)):
                raise ConfigError(
                    f"output path not writable: {o.path} (directory {parent} missing or read-only)"
                )


def _model_label(model: LevyModel) -> str:
    if isinstance(model, NoJumps):
        return "bs"
    return model_to_dict(model)["type"]


# ---------------------------------------------------------------------------
# plot data


def emit_plotdata(
    surfaces,
    path: str,
    s_min: float = 80.0,
    s_max: float = 125.0,
    n_samples: int = 91,
) -> None:
    """Write columnar t=0 prices `S,V_<label>,...` sampled on [s_min, s_max].

    surfaces maps labels to either a PriceSurface or a callable S -> V (a
    closed-form reference).  Labels bs, vg, merton come first in that order;
    any others follow in the order given.  Values use 6 significant digits.
    """
    items = list(surfaces.items()) if isinstance(surfaces, Mapping) else list(surfaces)
    if not items:
        raise ValueError("need at least one surface")
    labels = [label for label, _ in items]
    if len(set(labels)) != len(labels):
        dupes = sorted({x for x in labels if labels.count(x) > 1})
        raise ValueError(f"overlapping column names: {', '.join(dupes)}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    ordered = [it for name in _CANONICAL_COLUMNS for it in items if it[0] == name]
    ordered += [it for it in items if it[0] not in _CANONICAL_COLUMNS]

    S = np.linspace(s_min, s_max, n_samples)
    columns = []
    for _, surf in ordered:
        if isinstance(surf, PriceSurface):
            vals = np.array([float(price_at(surf, 0.0, s)) for s in S])
        else:
            vals = np.asarray(surf(S), dtype=float)
        columns.append(vals)
    with open(path, "w", newline="") as fh:
        fh.write("S," + ",".join(f"V_{label}" for label, _ in ordered) + "\n")
        for i, s in enumerate(S):
            fh.write(f"{s:.6g}," + ",".join(f"{col[i]:.6g}" for col in columns) + "\n")


# ---------------------------------------------------------------------------
# the price command


def _solve_scenario(cfg: RunConfig, rate: float) -> tuple[OptionSpec, PriceSurface | None]:
    """One pricing job; returns surface None when the closed form substitutes."""
    spec = dataclasses.replace(cfg.option, rate=rate)
    if cfg.closed_form and isinstance(cfg.model, NoJumps):
        return spec, None
    if cfg.style == "american":
        pcfg = cfg.penalty if cfg.penalty is not None else PenaltyConfig()
        return spec, solve_american_penalized(spec, cfg.model, cfg.grid, pcfg)
    return spec, solve_european(spec, cfg.model, cfg.grid)


def _price_on(spec: OptionSpec, surface: PriceSurface | None, s: float) -> float:
    if surface is None:
        return float(bs_price(spec, s))
    return float(price_at(surface, 0.0, s))


def _suffixed(path: str, tag: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}_{tag}{ext}"


def _print_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))


def _execute(cfg: RunConfig) -> int:
    try:
        with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
            futures = [pool.submit(_solve_scenario, cfg, sc.rate) for sc in cfg.scenarios]
            results = [f.result() for f in futures]

        spots: list[float] = []
        for sc in cfg.scenarios:
            spots.extend(s for s in sc.spots if s not in spots)
        col_names: list[str] = []
        col_values: list[dict[float, float]] = []
        for sc, (spec, surface) in zip(cfg.scenarios, results):
            name = f"V_r{sc.rate:g}"
            while name in col_names:
                name += "'"
            col_names.append(name)
            col_values.append({s: _price_on(spec, surface, s) for s in sc.spots})
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2

    multi = len(cfg.scenarios) > 1
    try:
        for out in cfg.outputs:
            if out.kind == "table":
                with open(out.path, "w", newline="") as fh:
                    fh.write("S,payoff," + ",".join(col_names) + "\n")
                    for s in spots:
                        cells = [
                            _fmt9(vals[s]) if s in vals else "" for vals in col_values
                        ]
                        fh.write(
                            f"{_fmt9(s)},{_fmt9(float(payoff(cfg.option, s)))},"
                            + ",".join(cells)
                            + "\n"
                        )
            elif out.kind == "surface":
                for sc, (_, surface) in zip(cfg.scenarios, results):
                    dest = _suffixed(out.path, f"r{sc.rate:g}") if multi else out.path
                    surface.to_csv(dest)
            elif out.kind == "boundary":
                for sc, (_, surface) in zip(cfg.scenarios, results):
                    dest = _suffixed(out.path, f"r{sc.rate:g}") if multi else out.path
                    extract_boundary(surface).to_csv(dest)
            elif out.kind == "plotdata":
                label = _model_label(cfg.model)
                for sc, (spec, surface) in zip(cfg.scenarios, results):
                    dest = _suffixed(out.path, f"r{sc.rate:g}") if multi else out.path
                    cols: dict[str, object] = {}
                    if label != "bs":
                        cols["bs"] = lambda S, spec=spec: bs_price(spec, S)
                    cols[label] = surface if surface is not None else (
                        lambda S, spec=spec: bs_price(spec, S)
                    )
                    emit_plotdata(cols, dest)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1

    header = ["S", "payoff", *col_names]
    rows = []
    for s in spots:
        row = [f"{s:g}", f"{float(payoff(cfg.option, s)):.6g}"]
        row += [f"{vals[s]:.6g}" if s in vals else "" for vals in col_values]
        rows.append(row)
    _print_table(header, rows)
    return 0


def _load_config(config_path: str, overrides: argparse.Namespace | None) -> RunConfig:
    with open(config_path) as fh:
        raw = json.load(fh)
    if overrides is not None:
        _apply_overrides(raw, overrides)
    return RunConfig.from_dict(raw)


def _apply_overrides(d: dict, args: argparse.Namespace) -> None:
    if getattr(args, "model", None) is not None:
        text = args.model.strip()
        if text.startswith("{"):
            try:
                d["model"] = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"--model is not valid JSON: {exc}") from exc
        else:
            d["model"] = {"type": text}
    if getattr(args, "rate", None) is not None:
        scenarios = [dict(sc) for sc in d.get("scenarios", ())]
        for sc in scenarios:
            sc["rate"] = args.rate
        deduped: list[dict] = []
        for sc in scenarios:
            if sc not in deduped:
                deduped.append(sc)
        d["scenarios"] = deduped
    if getattr(args, "grid_n", None) is not None:
        d.setdefault("grid", {})["n_space"] = args.grid_n
    if getattr(args, "grid_m", None) is not None:
        d.setdefault("grid", {})["n_time"] = args.grid_m
    if getattr(args, "epsilon", None) is not None:
        penalty = d.get("penalty") or {}
        penalty["epsilon"] = args.epsilon
        d["penalty"] = penalty
    if getattr(args, "seed", None) is not None:
        d["seed"] = args.seed
    if getattr(args, "closed_form", False):
        d["closed_form"] = True
    if getattr(args, "output", None) is not None:
        outputs = [o for o in d.get("outputs", ()) if o.get("kind") != "table"]
        outputs.append({"kind": "table", "path": args.output})
        d["outputs"] = outputs


def run(config_path: str, overrides: argparse.Namespace | None = None) -> int:
    """Exit 0 on success, 1 on a parse/validation problem, 2 on numerical failure."""
    try:
        cfg = _load_config(config_path, overrides)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return _execute(cfg)


# ---------------------------------------------------------------------------
# the check command


def check(config_path: str) -> int:
    """Print admissibility, integrability, and structural reports for the
    configured model; exit 0 when every check passes, 2 otherwise."""
    try:
        cfg = _load_config(config_path, None)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    model = cfg.model
    if isinstance(model, NoJumps):
        print("model: none (no jump component; measure checks are vacuous)")
        return 0
    print(f"model: {_model_label(model)}")
    ok = True
    try:
        w = shape_witness(model)
    except ValueError as exc:
        print(f"witness: unavailable ({exc})")
        ok = False
    else:
        print(
            f"witness: alpha={w.alpha:g} d_minus={w.d_minus:g} d_plus={w.d_plus:g} "
            f"mu={w.mu:g} c0={w.c0:g} admissible={w.admissible}"
        )
        ok = ok and w.admissible
    rep = integrability_check(model)
    print(f"integrability: passed={rep.passed} value={rep.value:.6g} ({rep.detail})")
    ok = ok and rep.passed
    for rate in sorted({sc.rate for sc in cfg.scenarios}):
        rep = structural_condition_check(model, rate)
        print(f"structural r={rate:g}: passed={rep.passed} value={rep.value:.6g} ({rep.detail})")
        ok = ok and rep.passed
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# the table1 preset


def _run_table1(args: argparse.Namespace) -> int:
    """Reproduce the benchmark put-price table: payoff, closed forms at both
    volatility conventions, and the two jump models, at r in {0, 0.1}."""
    try:
        grid = GridSpec(
            n_space=args.grid_n if args.grid_n else 400,
            n_time=args.grid_m if args.grid_m else 200,
        )
        if args.output:
            parent = os.path.dirname(os.path.abspath(args.output))
            if not (os.path.isdir(parent) and os.access(parent, os.W_OK)):
                raise ConfigError(f"output path not writable: {args.output}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    base = OptionSpec(strike=100.0, expiry=1.0, rate=0.0, sigma=0.23, kind="put")
    merton = Merton(lam=0.1, m=-0.2, delta=0.15)
    vg = VarianceGamma.from_bm_params(theta=-0.43, kappa=0.27, sigma_vg=0.23)
    rates = (0.0, 0.1)

    try:
        with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
            futures = {
                (name, r): pool.submit(
                    solve_european, dataclasses.replace(base, rate=r), model, grid
                )
                for name, model in (("merton", merton), ("vg", vg))
                for r in rates
            }
            surfaces = {key: f.result() for key, f in futures.items()}

        col_names: list[str] = []
        columns: list[list[float]] = []
        for r in rates:
            spec = dataclasses.replace(base, rate=r)
            spec12 = dataclasses.replace(spec, sigma=0.12)
            col_names += [
                f"bs_sigma0.12_r{r:g}",
                f"bs_sigma0.23_r{r:g}",
                f"merton_r{r:g}",
                f"vg_r{r:g}",
            ]
            columns.append([float(bs_price(spec12, s)) for s in _TABLE1_SPOTS])
            columns.append([float(bs_price(spec, s)) for s in _TABLE1_SPOTS])
            columns.append(
                [float(price_at(surfaces[("merton", r)], 0.0, s)) for s in _TABLE1_SPOTS]
            )
            columns.append(
                [float(price_at(surfaces[("vg", r)], 0.0, s)) for s in _TABLE1_SPOTS]
            )
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2

    pay = [float(payoff(base, s)) for s in _TABLE1_SPOTS]
    if args.output:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write("S,payoff," + ",".join(col_names) + "\n")
                for i, s in enumerate(_TABLE1_SPOTS):
                    fh.write(
                        f"{_fmt9(s)},{_fmt9(pay[i])},"
                        + ",".join(_fmt9(col[i]) for col in columns)
                        + "\n"
                    )
        except OSError as exc:
            print(f"error: cannot write output: {exc}", file=sys.stderr)
            return 1

    header = ["S", "payoff", *col_names]
    rows = []
    for i, s in enumerate(_TABLE1_SPOTS):
        rows.append(
            [f"{s:g}", f"{pay[i]:.6g}", *(f"{col[i]:.6g}" for col in columns)]
        )
    _print_table(header, rows)
    return 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levypide",
        description="Finite-difference option pricing under jump-diffusion models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("price", help="run the pricing jobs from a config file")
    pp.add_argument("--config", required=True, help="JSON run configuration")
    pp.add_argument(
        "--model",
        help="override the model: a bare name like 'none' or an inline JSON object",
    )
    pp.add_argument("--rate", type=float, help="set every scenario's rate")
    pp.add_argument("--output", help="set the table output path")
    pp.add_argument("--grid-n", type=int, dest="grid_n", help="spatial intervals")
    pp.add_argument("--grid-m", type=int, dest="grid_m", help="time steps")
    pp.add_argument("--epsilon", type=float, help="penalty strength (american style)")
    pp.add_argument(
        "--closed-form",
        action="store_true",
        dest="closed_form",
        help="use the closed form when the model has no jumps",
    )
    pp.add_argument("--seed", type=int, help="seed for sampling-based outputs")

    pc = sub.add_parser("check", help="run the measure checks for a config's model")
    pc.add_argument("--config", required=True, help="JSON run configuration")

    pt = sub.add_parser("table1", help="reproduce the benchmark price table")
    pt.add_argument("--output", help="also write the table as CSV")
    pt.add_argument("--grid-n", type=int, dest="grid_n", help="spatial intervals")
    pt.add_argument("--grid-m", type=int, dest="grid_m", help="time steps")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        if args.command == "price":
            return run(args.config, args)
        if args.command == "check":
            return check(args.config)
        return _run_table1(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
