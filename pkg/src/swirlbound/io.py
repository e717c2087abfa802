"""Run configuration, binary checkpoints, diagnostics CSV and trajectory folders.

Configuration files are INI with four sections; every key is optional except
the grid block and ``evolution.gamma0``/``evolution.t_end``::

    [grid]          r_min r_max z_min z_max n_r n_z periodic_z
    [evolution]     gamma0 omega0 psi_boundary t_end dt_rule dt cfl_safety
                    advection
    [verification]  radii ladder_depth ceiling_i ceiling_ii family_size
                    family_seed q scaling_k
    [output]        directory cadence

Field expressions use ``r`` and ``z`` and the functions listed in
:data:`EXPRESSION_NAMES`.  Checkpoints are little-endian::

    b"AXNS" u32 version=1 u64 n_r u64 n_z f64 r_min r_max z_min z_max
    u8 periodic_z f64 time, then Gamma and Omega as row-major f64 (n_r, n_z)
"""
import configparser
import csv
import dataclasses
import re
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from .errors import (BadMagicError, GridError, ParseError, ShapeMismatchError,
                     TruncatedFileError, ValidationError, VersionMismatchError)
from .evolution import (DIAGNOSTIC_COLUMNS, DiagnosticsRecord, EvolutionConfig,
                        SwirlState, SwirlSystem, Trajectory, diagnostics)
from .grid import make_grid

MAGIC = b"AXNS"
VERSION = 1
_HEADER = struct.Struct("<4sIQQddddBd")

EXPRESSION_NAMES = ("sin", "cos", "tan", "exp", "log", "sqrt", "tanh", "sinh",
                    "cosh", "pi", "E", "Abs", "Piecewise", "Heaviside", "Min", "Max",
                    "And", "Or")


# -- expressions --------------------------------------------------------------------

_R, _Z = sp.symbols("r z", real=True)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def parse_field(text, key="expression"):
    """Parse ``text`` into a sympy expression of ``r`` and ``z``.

    Only the symbols ``r``, ``z``, numbers and :data:`EXPRESSION_NAMES` are
    accepted.
    """
    allowed = set(EXPRESSION_NAMES) | {"r", "z", "True", "False"}
    for name in _IDENT.findall(text):
        if name not in allowed:
            raise ValidationError(key, f"unknown name {name!r} in expression")
    ns = {n: getattr(sp, n) for n in EXPRESSION_NAMES}
    ns.update({"Integer": sp.Integer, "Float": sp.Float, "Rational": sp.Rational,
               "Symbol": sp.Symbol, "True": sp.true, "False": sp.false})
    try:
        expr = parse_expr(text, local_dict={"r": _R, "z": _Z}, global_dict=ns,
                          transformations=standard_transformations)
    except Exception as exc:  # sympy raises a zoo of types here
        raise ValidationError(key, f"cannot parse expression: {exc}") from None
    extra = expr.free_symbols - {_R, _Z}
    if extra:
        raise ValidationError(key, f"unexpected symbols {sorted(map(str, extra))}")
    return expr


def field_function(expr):
    """Numpy callable ``f(r, z)`` for a parsed expression."""
    f = sp.lambdify((_R, _Z), expr, "numpy")
    return lambda r, z: np.broadcast_to(np.asarray(f(r, z), dtype=float),
                                        np.broadcast(r, z).shape)


# -- configuration ------------------------------------------------------------------

@dataclass(frozen=True)
class GridSection:
    r_min: float
    r_max: float
    z_min: float
    z_max: float
    n_r: int
    n_z: int
    periodic_z: bool = False


@dataclass(frozen=True)
class EvolutionSection:
    gamma0: str
    t_end: float
    omega0: str = "0"
    psi_boundary: str = "0"
    dt_rule: str = "cfl"
    dt: float = None
    cfl_safety: float = 0.5
    advection: str = "centered"


@dataclass(frozen=True)
class VerificationSection:
    radii: tuple = (0.25, 0.5, 1.0)
    ladder_depth: int = 8
    ceiling_i: float = 1.0
    ceiling_ii: float = 3.0e4
    family_size: int = 50
    family_seed: int = 7
    q: tuple = (2.0, 10 / 3)
    scaling_k: tuple = (1.0, 0.5, 0.25)


@dataclass(frozen=True)
class OutputSection:
    directory: str = "run"
    cadence: float = None


@dataclass(frozen=True)
class RunConfig:
    grid: GridSection
    evolution: EvolutionSection
    verification: VerificationSection = VerificationSection()
    output: OutputSection = OutputSection()

    def make_grid(self):
        g = self.grid
        return make_grid(g.r_min, g.r_max, g.z_min, g.z_max, g.n_r, g.n_z, g.periodic_z)

    def evolution_config(self):
        e = self.evolution
        return EvolutionConfig(
            self.make_grid(), field_function(parse_field(e.gamma0)), e.t_end,
            omega0=field_function(parse_field(e.omega0)),
            psi_boundary=field_function(parse_field(e.psi_boundary)),
            dt_rule=e.dt_rule, dt=e.dt, cfl_safety=e.cfl_safety,
            advection=e.advection, output_interval=self.output.cadence)


_SECTIONS = {"grid": GridSection, "evolution": EvolutionSection,
             "verification": VerificationSection, "output": OutputSection}


_TYPES = {
    "grid": {"r_min": "float", "r_max": "float", "z_min": "float", "z_max": "float",
             "n_r": "int", "n_z": "int", "periodic_z": "bool"},
    "evolution": {"gamma0": "expr", "t_end": "float", "omega0": "expr",
                  "psi_boundary": "expr", "dt_rule": "str", "dt": "float",
                  "cfl_safety": "float", "advection": "str"},
    "verification": {"radii": "floats", "ladder_depth": "int", "ceiling_i": "float",
                     "ceiling_ii": "float", "family_size": "int", "family_seed": "int",
                     "q": "floats", "scaling_k": "floats"},
    "output": {"directory": "str", "cadence": "float"},
}
_REQUIRED = {"grid": ("r_min", "r_max", "z_min", "z_max", "n_r", "n_z"),
             "evolution": ("gamma0", "t_end")}


def _line_index(text):
    """Map ``(section, key)`` and ``section`` to 1-based line numbers."""
    where, section = {}, None
    for no, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            where.setdefault(section, no)
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            where.setdefault((section, m.group(1).strip().lower()), no)
    return where


def _convert(kind, raw, key, line):
    raw = raw.strip()
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            if not re.fullmatch(r"[+-]?\d+", raw):
                raise ValueError(raw)
            return int(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "floats":
            parts = [p for p in re.split(r"[,\s]+", raw) if p]
            if not parts:
                raise ValueError(raw)
            return tuple(float(p) for p in parts)
        if kind == "expr":
            return str(parse_field(raw, key))
        return raw
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError(line, key, f"malformed {kind} value {raw!r}") from None


def parse_config(text, source="<string>"):
    """Parse and validate configuration text (see :func:`load_config`)."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str.lower
    try:
        parser.read_string(text, source=source)
    except configparser.DuplicateOptionError as exc:
        raise ParseError(exc.lineno, f"{exc.section}.{exc.option}", "duplicate key") from None
    except configparser.DuplicateSectionError as exc:
        raise ParseError(exc.lineno, exc.section, "duplicate section") from None
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError(exc.lineno, exc.line.strip(), "entry outside a section") from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ParseError(lineno, line.strip(), "malformed line") from None
    lines = _line_index(text)
    values = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ParseError(lines.get(section, 0), section, "unknown section")
        values[section] = {}
        for key, raw in parser.items(section):
            line = lines.get((section, key), 0)
            kind = _TYPES[section].get(key)
            if kind is None:
                raise ParseError(line, f"{section}.{key}", "unknown key")
            if raw.strip() == "" or raw.strip().lower() == "none":
                continue
            values[section][key] = _convert(kind, raw, f"{section}.{key}", line)
    for section, keys in _REQUIRED.items():
        for key in keys:
            if key not in values.get(section, {}):
                raise ValidationError(f"{section}.{key}", "required key missing")
    cfg = RunConfig(**{name: _SECTIONS[name](**values.get(name, {}))
                       for name in _SECTIONS if name in values or name in _REQUIRED})
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    g, e, v, o = cfg.grid, cfg.evolution, cfg.verification, cfg.output
    if not g.r_min > 0:
        raise ValidationError("grid.r_min", "axis excluded")
    if not g.r_max > g.r_min:
        raise ValidationError("grid.r_max", "must exceed r_min")
    if not g.z_max > g.z_min:
        raise ValidationError("grid.z_max", "must exceed z_min")
    for key in ("n_r", "n_z"):
        if getattr(g, key) < 8:
            raise ValidationError(f"grid.{key}", "need at least 8 nodes")
    if not e.t_end > 0:
        raise ValidationError("evolution.t_end", "must be positive")
    if e.dt_rule not in ("cfl", "fixed"):
        raise ValidationError("evolution.dt_rule", "must be 'cfl' or 'fixed'")
    if e.dt_rule == "fixed" and not (e.dt is not None and e.dt > 0):
        raise ValidationError("evolution.dt", "a fixed dt rule needs dt > 0")
    if e.dt is not None and not e.dt > 0:
        raise ValidationError("evolution.dt", "must be positive")
    if not 0 < e.cfl_safety <= 1:
        raise ValidationError("evolution.cfl_safety", "must lie in (0, 1]")
    if e.advection not in ("centered", "upwind"):
        raise ValidationError("evolution.advection", "must be 'centered' or 'upwind'")
    if any(not (0 < R <= 1) for R in v.radii):
        raise ValidationError("verification.radii", "each R must lie in (0, 1]")
    if v.ladder_depth < 0:
        raise ValidationError("verification.ladder_depth", "must be >= 0")
    if not (v.ceiling_i > 0 and v.ceiling_ii > 0):
        raise ValidationError("verification.ceiling_i", "ceilings must be positive")
    if v.family_size < 1:
        raise ValidationError("verification.family_size", "must be >= 1")
    if v.family_seed < 0:
        raise ValidationError("verification.family_seed", "must be >= 0")
    if any(not q > 1 for q in v.q):
        raise ValidationError("verification.q", "each q must exceed 1")
    if any(not (0 < k <= 1) for k in v.scaling_k):
        raise ValidationError("verification.scaling_k", "each k must lie in (0, 1]")
    if o.cadence is not None and not o.cadence > 0:
        raise ValidationError("output.cadence", "must be positive")


def load_config(path):
    """Read and validate a configuration file.

    Raises :class:`ParseError` (with line number) for unknown or malformed
    entries and :class:`ValidationError` for out-of-range values.
    """
    text = Path(path).read_text()
    return parse_config(text, str(path))


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(repr(float(x)) for x in value)
    return str(value)


def dump_config(cfg):
    """Normalized INI text with every key spelled out."""
    out = []
    for name in _SECTIONS:
        section = getattr(cfg, name)
        out.append(f"[{name}]")
        for f in dataclasses.fields(section):
            value = getattr(section, f.name)
            out.append(f"{f.name} = {'none' if value is None else _fmt(value)}")
        out.append("")
    return "\n".join(out)


# -- checkpoints --------------------------------------------------------------------

def write_checkpoint(state, path):
    g = state.grid
    header = _HEADER.pack(MAGIC, VERSION, g.n_r, g.n_z, g.r_min, g.r_max, g.z_min,
                          g.z_max, int(g.periodic_z), state.t)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(state.gamma, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(state.omega, dtype="<f8").tobytes())


@dataclass(frozen=True)
class Checkpoint:
    grid: object
    t: float
    gamma: np.ndarray
    omega: np.ndarray

    def state(self, system=None):
        system = SwirlSystem(self.grid) if system is None else system
        return system.recover(self.t, self.gamma, self.omega)


def read_checkpoint_raw(path, expected_grid=None):
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        if len(data) < 4 and MAGIC.startswith(data):
            raise TruncatedFileError(f"{path}: file ends inside the header")
        raise BadMagicError(f"{path}: not a checkpoint (magic {data[:4]!r})")
    if len(data) < _HEADER.size:
        raise TruncatedFileError(f"{path}: file ends inside the header")
    magic, version, n_r, n_z, r_min, r_max, z_min, z_max, periodic, t = \
        _HEADER.unpack_from(data)
    if version != VERSION:
        raise VersionMismatchError(f"{path}: version {version}, expected {VERSION}")
    count = n_r * n_z
    need = _HEADER.size + 16 * count
    if len(data) < need:
        raise TruncatedFileError(f"{path}: {len(data)} bytes, expected {need}")
    if len(data) > need:
        raise ShapeMismatchError(f"{path}: {len(data) - need} trailing bytes")
    try:
        grid = make_grid(r_min, r_max, z_min, z_max, n_r, n_z, bool(periodic))
    except GridError as exc:
        raise ShapeMismatchError(f"{path}: invalid grid in header: {exc}") from None
    if expected_grid is not None and grid != expected_grid:
        raise ShapeMismatchError(
            f"{path}: grid {grid.shape} on [{r_min}, {r_max}]x[{z_min}, {z_max}] "
            f"does not match the configured grid {expected_grid.shape}")
    arr = np.frombuffer(data, dtype="<f8", count=2 * count, offset=_HEADER.size)
    gamma = arr[:count].reshape(n_r, n_z).astype(float)
    omega = arr[count:].reshape(n_r, n_z).astype(float)
    return Checkpoint(grid, t, gamma, omega)


def read_checkpoint(path, expected_grid=None, system=None):
    """Load a checkpoint and rebuild the derived fields as a :class:`SwirlState`.

    ``system`` supplies the streamfunction boundary data (zero by default).
    """
    cp = read_checkpoint_raw(path, expected_grid)
    if system is not None and system.grid != cp.grid:
        raise ShapeMismatchError(f"{path}: checkpoint grid differs from the system grid")
    return cp.state(system)


# -- diagnostics --------------------------------------------------------------------

def _g17(x):
    return format(float(x), ".17g")


def emit_diagnostics(records, path):
    """CSV with a fixed header and 17 significant digits per value."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIAGNOSTIC_COLUMNS)
        for rec in records:
            w.writerow([_g17(x) for x in rec.row()])


def read_diagnostics(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != DIAGNOSTIC_COLUMNS:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    return [DiagnosticsRecord(*map(float, row)) for row in rows[1:]]


# -- trajectory folders -------------------------------------------------------------

def save_trajectory(trajectory, directory, config=None):
    """Write checkpoints, ``diagnostics.csv`` and (optionally) ``run.ini``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for i in range(len(trajectory)):
        write_checkpoint(SwirlState(trajectory.grid, float(trajectory.times[i]),
                                    trajectory.gamma[i], trajectory.omega[i],
                                    None, None, None), d / f"snap_{i:05d}.axns")
    emit_diagnostics(trajectory.records, d / "diagnostics.csv")
    meta = [f"t_end = {trajectory.t_end!r}",
            f"advection = {trajectory.system.advection}",
            f"error = {'none' if trajectory.error is None else type(trajectory.error).__name__}"]
    (d / "trajectory.txt").write_text("\n".join(meta) + "\n")
    if config is not None:
        (d / "run.ini").write_text(dump_config(config))


def load_trajectory(directory):
    """Rebuild a :class:`Trajectory` from :func:`save_trajectory` output."""
    d = Path(directory)
    files = sorted(d.glob("snap_*.axns"))
    if not files:
        raise FileNotFoundError(f"{d}: no checkpoints found")
    snaps = [read_checkpoint_raw(f) for f in files]
    grid = snaps[0].grid
    for f, s in zip(files, snaps):
        if s.grid != grid:
            raise ShapeMismatchError(f"{f}: grid differs from {files[0].name}")
    meta = {}
    if (d / "trajectory.txt").exists():
        for line in (d / "trajectory.txt").read_text().splitlines():
            k, _, v = line.partition("=")
            meta[k.strip()] = v.strip()
    psi_b, advection = None, meta.get("advection", "centered")
    if (d / "run.ini").exists():
        cfg = load_config(d / "run.ini")
        psi_b = field_function(parse_field(cfg.evolution.psi_boundary))
    system = SwirlSystem(grid, psi_b, advection)
    times = np.array([s.t for s in snaps])
    gamma = np.array([s.gamma for s in snaps])
    omega = np.array([s.omega for s in snaps])
    t_end = float(meta.get("t_end", times[-1]))
    traj = Trajectory(system, times, gamma, omega, t_end, [], float(np.max(np.abs(gamma[0]))))
    traj.records = [diagnostics(traj.state(i)) for i in range(len(traj))]
    return traj


__all__ = [
    "RunConfig", "GridSection", "EvolutionSection", "VerificationSection",
    "OutputSection", "parse_config", "load_config", "dump_config", "validate_config",
    "parse_field", "field_function", "write_checkpoint", "read_checkpoint",
    "read_checkpoint_raw", "Checkpoint", "emit_diagnostics", "read_diagnostics",
    "save_trajectory", "load_trajectory", "MAGIC", "VERSION",
]
