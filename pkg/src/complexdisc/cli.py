"""Command line driver: one subcommand per experiment, CSV tables plus a JSON manifest.

Parameters come from an INI-style file (``--config``) whose sections group
the keys below; command line flags of the same name override file values.
Exit status is 0 on success, 2 for configuration problems and 3 for
numerical failures.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import platform
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .analysis import phase_diagram
from .bathmap import SpectralDensity, star_env_complex, star_env_real
from .cquad import semicircle_rule
from .errors import ComplexDiscError, ConfigurationError
from .models import (
    GOLDEN_BETA,
    GaahParams,
    biorth_eig,
    build_heff,
    dephasing_discrete_complex,
    dephasing_discrete_real,
    dephasing_exact,
    gaah_hamiltonian,
    highest_excited_state,
    propagate,
)
from .oracle import VolterraConfig, volterra_solve
from .polyquad import RealMeasure, gauss_rule

EXPERIMENTS = (
    "quad-dump",
    "cquad-dump",
    "bath-dump",
    "dephasing",
    "gaah-survival",
    "gaah-longtime",
    "asp-diagram",
    "oracle",
    "compare",
)

_NAMED = {"pi": np.pi, "golden": GOLDEN_BETA}


def _float(text):
    if isinstance(text, (int, float)):
        return float(text)
    key = str(text).strip().lower()
    if key in _NAMED:
        return float(_NAMED[key])
    return float(key)


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _bool(text):
    if isinstance(text, bool):
        return text
    key = str(text).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def _choice(*options):
    def parse(text):
        text = str(text).strip()
        if text not in options:
            raise ValueError(f"{text!r} not in {options}")
        return text

    parse.options = options
    return parse


@dataclass(frozen=True)
class Param:
    section: str
    parse: object
    default: object
    help: str


PARAMS: dict[str, Param] = {
    "experiment": Param("run", _choice(*EXPERIMENTS), None, "experiment to run"),
    "output": Param("run", str, "out.csv", "CSV output path; the manifest goes next to it"),
    "workers": Param("run", _int, 0, "parallel workers for sweeps (0 = all cores)"),
    "N_s": Param("model", _int, 21, "lattice sites"),
    "Delta": Param("model", _float, 1.0, "quasiperiodic potential strength"),
    "beta": Param("model", _float, GOLDEN_BETA, "potential wavenumber (accepts 'golden')"),
    "phi": Param("model", _float, np.pi, "potential phase (accepts 'pi')"),
    "a": Param("model", _float, 0.0, "deformation in [0, 1)"),
    "hopping": Param("model", _float, 1.0, "hopping amplitude"),
    "eta": Param("bath", _float, 0.1, "coupling strength"),
    "omega_c": Param("bath", _float, 10.0, "cutoff frequency"),
    "s": Param("bath", _float, 1.0, "Ohmic exponent"),
    "N_k": Param("bath", _int, 40, "number of bath modes / quadrature nodes"),
    "R": Param("bath", _float, 2.0, "contour radius (complex bath)"),
    "kind": Param("bath", _choice("real", "complex"), "complex", "bath discretization"),
    "coupling_conjugation": Param("bath", _choice("transpose", "conjugate"), "transpose", "mode-to-site coupling"),
    "dephasing_form": Param("bath", _choice("analytic", "literal"), "analytic", "complex dephasing sum"),
    "t_min": Param("time", _float, 0.0, "first output time"),
    "t_max": Param("time", _float, 200.0, "last output time"),
    "dt_out": Param("time", _float, 0.5, "output spacing"),
    "dt": Param("oracle", _float, 0.002, "Volterra time step"),
    "memory_term": Param("oracle", _choice("common", "independent"), "common", "bath shared by all sites or not"),
    "kernel_mode": Param("oracle", _choice("analytic", "numeric"), "analytic", "memory kernel evaluation"),
    "extrapolate": Param("oracle", _bool, True, "Richardson step-halving extrapolation"),
    "delta_min": Param("sweep", _float, 0.2, "first Delta of the sweep"),
    "delta_max": Param("sweep", _float, 6.0, "last Delta of the sweep"),
    "delta_step": Param("sweep", _float, 0.2, "Delta spacing"),
    "asp_t0": Param("sweep", _float, 100.0, "averaging window start"),
    "asp_t1": Param("sweep", _float, 1000.0, "averaging window end"),
    "asp_dt": Param("sweep", _float, 0.5, "averaging sample spacing"),
}
SECTIONS = sorted({p.section for p in PARAMS.values()})


def load_config(path) -> dict:
    """Read an INI file and return ``{key: parsed value}``; unknown sections or keys are errors."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot read config ({exc.strerror})") from exc
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigurationError(f"{path}: unknown section [{section}] (expected one of {', '.join(SECTIONS)})")
        for key, raw in parser.items(section):
            spec = PARAMS.get(key)
            if spec is None:
                raise ConfigurationError(f"{path}: [{section}] unknown key {key!r}")
            if spec.section != section:
                raise ConfigurationError(f"{path}: key {key!r} belongs in [{spec.section}], not [{section}]")
            try:
                values[key] = spec.parse(raw)
            except ValueError as exc:
                raise ConfigurationError(f"{path}: [{section}] {key} = {raw!r}: {exc}") from exc
    return values


def resolve(experiment: str | None, file_values: dict, overrides: dict) -> dict:
    cfg = {k: p.default for k, p in PARAMS.items()}
    cfg.update(file_values)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    if experiment is not None:
        if file_values.get("experiment") not in (None, experiment):
            raise ConfigurationError(
                f"config is for experiment {file_values['experiment']!r}, not {experiment!r}"
            )
        cfg["experiment"] = experiment
    if cfg["experiment"] is None:
        raise ConfigurationError("no experiment given (use a subcommand or [run] experiment = ...)")
    if cfg["workers"] < 0:
        raise ConfigurationError("workers must be >= 0")
    return cfg


# -- experiments ------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0"  # folds -0.0 as well
    return f"{x:.12g}"


def _time_grid(cfg):
    t0, t1, dt = cfg["t_min"], cfg["t_max"], cfg["dt_out"]
    if dt <= 0 or t1 < t0 or t0 < 0:
        raise ConfigurationError("time grid needs 0 <= t_min <= t_max and dt_out > 0")
    n = int(round((t1 - t0) / dt))
    return t0 + dt * np.arange(n + 1)


def _sd(cfg):
    return SpectralDensity(cfg["eta"], cfg["omega_c"], cfg["s"])


def _gaah(cfg, **changes):
    fields = dict(N_s=cfg["N_s"], Delta=cfg["Delta"], beta=cfg["beta"], phi=cfg["phi"], a=cfg["a"], hopping=cfg["hopping"])
    fields.update(changes)
    return GaahParams(**fields)


def _bath(cfg):
    sd = _sd(cfg)
    if cfg["kind"] == "real":
        return star_env_real(sd, cfg["N_k"])
    return star_env_complex(sd, cfg["N_k"], cfg["R"])


def _exp_quad(cfg):
    rule = gauss_rule(RealMeasure.laguerre(1.0, cfg["s"]), cfg["N_k"])
    return ["index", "node", "weight"], [(i, x, w) for i, (x, w) in enumerate(zip(rule.nodes, rule.weights))]


def _exp_cquad(cfg):
    rule = semicircle_rule(cfg["N_k"])
    header = ["index", "re_node", "im_node", "re_weight", "im_weight"]
    return header, [(i, z.real, z.imag, w.real, w.imag) for i, (z, w) in enumerate(zip(rule.nodes, rule.weights))]


def _exp_bath(cfg):
    b = _bath(cfg)
    E = np.asarray(b.energies, dtype=complex)
    c = np.asarray(b.couplings, dtype=complex)
    header = ["j", "re_energy", "im_energy", "re_coupling", "im_coupling"]
    return header, [(j, E[j].real, E[j].imag, c[j].real, c[j].imag) for j in range(b.N_k)]


def _exp_dephasing(cfg):
    t = _time_grid(cfg)
    b = _bath(cfg)
    if b.kind == "real":
        approx = dephasing_discrete_real(b, t)
    else:
        approx = np.abs(dephasing_discrete_complex(b, t, cfg["dephasing_form"]))
    exact = dephasing_exact(t, _sd(cfg)).value
    return ["t", "approx", "exact", "abs_err"], list(zip(t, approx, exact, np.abs(approx - exact)))


def _eigen_route(cfg, t):
    p = _gaah(cfg)
    H = gaah_hamiltonian(p)
    es = highest_excited_state(H)
    heff = build_heff(H, _bath(cfg), cfg["coupling_conjugation"])
    e = biorth_eig(heff)
    psi0 = np.concatenate([es, np.zeros(heff.N_k)]).astype(complex)
    psi = propagate(e, psi0, t)
    amp = es @ psi[: p.N_s]
    sys_norm = np.sum(np.abs(psi[: p.N_s]) ** 2, axis=0)
    return amp, sys_norm


def _exp_survival(cfg):
    t = _time_grid(cfg)
    amp, _ = _eigen_route(cfg, t)
    return ["t", "survival", "re_amp", "im_amp"], list(zip(t, np.abs(amp) ** 2, amp.real, amp.imag))


def _exp_longtime(cfg):
    t = _time_grid(cfg)
    amp, sys_norm = _eigen_route(cfg, t)
    return ["t", "survival", "system_norm"], list(zip(t, np.abs(amp) ** 2, sys_norm))


def _oracle_run(cfg):
    if cfg["t_min"] != 0.0:
        raise ConfigurationError("the oracle integrates from t = 0; set t_min = 0")
    p = _gaah(cfg)
    es = highest_excited_state(gaah_hamiltonian(p))
    vc = VolterraConfig(
        dt=cfg["dt"],
        t_max=cfg["t_max"],
        dt_out=cfg["dt_out"],
        kernel_mode=cfg["kernel_mode"],
        bath=cfg["memory_term"],
        extrapolate=cfg["extrapolate"],
    )
    res = volterra_solve(p, _sd(cfg), es, vc)
    return res.times, res.amplitudes @ es, np.sum(np.abs(res.amplitudes) ** 2, axis=1)


def _exp_oracle(cfg):
    t, amp, norm = _oracle_run(cfg)
    return ["t", "survival", "system_norm", "re_amp", "im_amp"], list(zip(t, np.abs(amp) ** 2, norm, amp.real, amp.imag))


def _exp_compare(cfg):
    t, amp, _ = _oracle_run(cfg)
    approx, _ = _eigen_route(cfg, t)
    exact = np.abs(amp) ** 2
    approx = np.abs(approx) ** 2
    return ["t", "exact", "approx", "abs_err"], list(zip(t, exact, approx, np.abs(approx - exact)))


def _exp_asp(cfg):
    lo, hi, step = cfg["delta_min"], cfg["delta_max"], cfg["delta_step"]
    if step <= 0 or hi < lo:
        raise ConfigurationError("sweep needs delta_max >= delta_min and delta_step > 0")
    deltas = np.round(lo + step * np.arange(int(round((hi - lo) / step)) + 1), 12)
    workers = cfg["workers"] or (os.cpu_count() or 1)
    rows = phase_diagram(
        _gaah(cfg),
        deltas,
        _sd(cfg),
        cfg["N_k"],
        cfg["R"],
        (cfg["asp_t0"], cfg["asp_t1"], cfg["asp_dt"]),
        cfg["coupling_conjugation"],
        workers,
    )
    header = ["Delta", "n", "E_n", "E_c", "side", "asp"]
    return header, [(r.Delta, r.n, r.E_n, r.E_c, r.side, r.asp) for r in rows]


RUNNERS = {
    "quad-dump": _exp_quad,
    "cquad-dump": _exp_cquad,
    "bath-dump": _exp_bath,
    "dephasing": _exp_dephasing,
    "gaah-survival": _exp_survival,
    "gaah-longtime": _exp_longtime,
    "asp-diagram": _exp_asp,
    "oracle": _exp_oracle,
    "compare": _exp_compare,
}


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def run(cfg: dict) -> Path:
    """Execute one resolved configuration; returns the CSV path."""
    start = time.perf_counter()
    header, rows = RUNNERS[cfg["experiment"]](cfg)
    out = Path(cfg["output"])
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, header, rows)
    manifest = {
        "experiment": cfg["experiment"],
        "parameters": {k: _jsonable(cfg[k]) for k in sorted(cfg)},
        "columns": header,
        "rows": len(rows),
        "versions": {
            "complexdisc": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "wall_time_s": round(time.perf_counter() - start, 3),
    }
    out.with_name(out.name + ".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="complexdisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run",) + EXPERIMENTS:
        helptext = "experiment named in the config file" if name == "run" else f"{name} experiment"
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", type=Path, help="INI-style parameter file")
        for key, spec in PARAMS.items():
            if key == "experiment":
                continue
            kwargs = dict(dest=key, default=None, help=f"{spec.help} [{spec.section}]")
            options = getattr(spec.parse, "options", None)
            if options:
                kwargs["choices"] = options
            else:
                kwargs["type"] = spec.parse
                kwargs["metavar"] = key.upper()
            sp.add_argument(f"--{key}", **kwargs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: getattr(args, k, None) for k in PARAMS if k != "experiment"}
    try:
        file_values = load_config(args.config) if args.config else {}
        experiment = None if args.command == "run" else args.command
        cfg = resolve(experiment, file_values, overrides)
        out = run(cfg)
    except ConfigurationError as exc:
        print(f"complexdisc: configuration error: {exc}", file=sys.stderr)
        return 2
    except ComplexDiscError as exc:
        print(f"complexdisc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
