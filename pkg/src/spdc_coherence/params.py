"""Physical parameter bundles and the flat key=value config format.

Unit convention, used by every module in this package:

* all lengths in micrometres (um),
* all transverse wave vectors in rad/um,
* densities normalized to unit integral over their 2D plane,
* entanglement witnesses compared against the dimensionless 1/2
  (working with wave vectors q = p/hbar removes hbar everywhere).

``math.inf`` is the sentinel for "this term is absent": an infinite
coherence length means a fully coherent pump, an infinite curvature
radius a flat phase front.  In config files the string ``inf`` maps to
the sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NonPositiveParameter, ParseError

__all__ = [
    "PumpParams",
    "CrystalParams",
    "validate_pump",
    "validate_crystal",
    "read_config",
    "load_params",
    "serialize_params",
    "CONFIG_KEYS",
]

#: default Gaussian-approximation width parameter; the common rounded value.
#: ``phasematch.calibrate_alpha`` recomputes it from scratch.
DEFAULT_ALPHA = 0.455


@dataclass(frozen=True)
class PumpParams:
    """Gaussian Schell-model pump at the crystal plane.

    w      beam width (um)
    k_p    pump wave number (rad/um)
    ell_c  transverse coherence length (um); inf = fully coherent
    R      wavefront curvature radius (um), signed; inf = flat phase
    """

    w: float
    k_p: float
    ell_c: float = math.inf
    R: float = math.inf


@dataclass(frozen=True)
class CrystalParams:
    """Nonlinear crystal geometry and phase-matching knobs.

    L      crystal length (um)
    k_p    pump wave number (rad/um); must match the pump's when combined
    z0     exit-face position (um): the crystal occupies [z0 - L, z0].
           Defaults to L, i.e. the entrance face sits at the origin.
           z0 = L/2 centres the crystal on the origin and makes the
           longitudinal spectrum purely real.
    alpha  width parameter of the Gaussian phase-matching approximation
    beta   nondegeneracy, beta^2 = k_i/k_s; 1 = degenerate pair
    """

    L: float
    k_p: float
    z0: float | None = None
    alpha: float = DEFAULT_ALPHA
    beta: float = 1.0

    def __post_init__(self):
        if self.z0 is None:
            object.__setattr__(self, "z0", float(self.L))


def validate_pump(p: PumpParams) -> PumpParams:
    """Check invariants; canonicalize infinities.  Returns the same
    instance when nothing needs rewriting.

    w, k_p: positive and finite.  ell_c: positive, inf allowed.
    R: nonzero (a zero curvature radius is degenerate; use inf for a
    flat phase front); -inf is folded onto +inf since the sign of an
    absent phase term is meaningless.
    """
    for name in ("w", "k_p"):
        v = getattr(p, name)
        if not (0.0 < v < math.inf):
            raise NonPositiveParameter(name, f"need a positive finite value, got {v!r}")
    if math.isnan(p.ell_c) or p.ell_c <= 0.0:
        raise NonPositiveParameter("ell_c", f"need a positive value (inf allowed), got {p.ell_c!r}")
    if math.isnan(p.R) or p.R == 0.0:
        raise NonPositiveParameter("R", f"need a nonzero value (inf allowed), got {p.R!r}")
    if math.isinf(p.R) and p.R < 0.0:
        return replace(p, R=math.inf)
    return p


def validate_crystal(c: CrystalParams) -> CrystalParams:
    """Check invariants.  z0 is unrestricted in sign but must be finite."""
    for name in ("L", "k_p", "alpha", "beta"):
        v = getattr(c, name)
        if not (0.0 < v < math.inf):
            raise NonPositiveParameter(name, f"need a positive finite value, got {v!r}")
    if not math.isfinite(c.z0):
        raise NonPositiveParameter("z0", f"need a finite position, got {c.z0!r}")
    return c


# -- config file format ------------------------------------------------------
#
# Flat `key = value` lines, '#' comments, blank lines ignored.  The value
# "inf" (any case) is the infinite sentinel.  crystal.k_p is not a key:
# the crystal inherits the pump wave number.

CONFIG_KEYS = (
    "pump.w",
    "pump.ell_c",
    "pump.R",
    "pump.k_p",
    "crystal.L",
    "crystal.z0",
    "crystal.alpha",
    "crystal.beta",
)

_REQUIRED_KEYS = ("pump.w", "pump.k_p", "crystal.L")


def read_config(text: str, source: str = "<config>") -> tuple[PumpParams, CrystalParams]:
    """Parse config text into validated parameter bundles.

    Missing optional keys take their dataclass defaults (ell_c = R = inf,
    z0 = L, alpha = 0.455, beta = 1).  Unknown or duplicate keys are
    rejected with the offending line number.
    """
    values: dict[str, float] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(source, lineno, f"expected 'key = value', got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in CONFIG_KEYS:
            raise ParseError(source, lineno, f"unknown key {key!r}")
        if key in values:
            raise ParseError(source, lineno, f"duplicate key {key!r} (first on line {lines[key]})")
        try:
            num = float(val)
        except ValueError:
            raise ParseError(source, lineno, f"cannot parse {val!r} as a number") from None
        if math.isnan(num):
            raise ParseError(source, lineno, "nan is not a valid parameter value")
        values[key] = num
        lines[key] = lineno
    for key in _REQUIRED_KEYS:
        if key not in values:
            raise ParseError(source, 0, f"missing required key {key!r}")

    pump_kwargs = {"w": values["pump.w"], "k_p": values["pump.k_p"]}
    if "pump.ell_c" in values:
        pump_kwargs["ell_c"] = values["pump.ell_c"]
    if "pump.R" in values:
        pump_kwargs["R"] = values["pump.R"]
    crystal_kwargs = {"L": values["crystal.L"], "k_p": values["pump.k_p"]}
    if "crystal.z0" in values:
        crystal_kwargs["z0"] = values["crystal.z0"]
    if "crystal.alpha" in values:
        crystal_kwargs["alpha"] = values["crystal.alpha"]
    if "crystal.beta" in values:
        crystal_kwargs["beta"] = values["crystal.beta"]

    p = validate_pump(PumpParams(**pump_kwargs))
    c = validate_crystal(CrystalParams(**crystal_kwargs))
    return p, c


def load_params(path) -> tuple[PumpParams, CrystalParams]:
    """``read_config`` on a file path."""
    with open(path, "r", encoding="utf-8") as fh:
        return read_config(fh.read(), source=str(path))


def _fmt_value(v: float) -> str:
    return "inf" if math.isinf(v) else repr(float(v))


def serialize_params(p: PumpParams, c: CrystalParams) -> str:
    """Write parameters back in config syntax; parse(serialize(...)) is the
    identity on validated bundles."""
    out = [
        f"pump.w = {_fmt_value(p.w)}",
        f"pump.ell_c = {_fmt_value(p.ell_c)}",
        f"pump.R = {_fmt_value(p.R)}",
        f"pump.k_p = {_fmt_value(p.k_p)}",
        f"crystal.L = {_fmt_value(c.L)}",
        f"crystal.z0 = {_fmt_value(c.z0)}",
        f"crystal.alpha = {_fmt_value(c.alpha)}",
        f"crystal.beta = {_fmt_value(c.beta)}",
    ]
    return "\n".join(out) + "\n"
