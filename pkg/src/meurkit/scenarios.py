"""Built-in scenarios and the JSON scenario file format.

File layout (one JSON object)::

    {
      "name": "paper4dim",
      "dim": 4,
      "observables": [{"name": "A", "matrix": [[[re, im], ...], ...]}, ...],
      "state": [[re, im], ...],
      "meps": {"psi_perp_1": [[re, im], ...]},         # optional
      "exclusion_operators": [{"pair": [j, k], "matrix": ...}],  # optional
      "metadata": {"key": "value"}                    # optional
    }
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .bounds import ExclusionOperator
from .errors import DimensionError, ParseError, RangeError, UncertaintyError, ValidationError, ZeroVectorError
from .meps import Meps, project_and_normalize
from .qcore import Observable, QuantumState, hatted_image, pair_statistics


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    observables: tuple[Observable, ...]
    psi: QuantumState
    observable_names: tuple[str, ...] = ()
    named_meps: dict[str, Meps] = field(default_factory=dict)
    exclusion_ops: dict[tuple[int, int], ExclusionOperator] = field(default_factory=dict)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        obs = tuple(self.observables)
        object.__setattr__(self, "observables", obs)
        names = tuple(self.observable_names) or tuple(f"O{i}" for i in range(len(obs)))
        if len(names) != len(obs):
            raise ValidationError("observable_names does not match observables")
        object.__setattr__(self, "observable_names", names)
        for n, o in zip(names, obs):
            if o.dim != self.psi.dim:
                raise DimensionError(f"observable {n!r} has dim {o.dim}, state has dim {self.psi.dim}")
        for n, m in self.named_meps.items():
            if m.dim != self.psi.dim:
                raise DimensionError(f"meps {n!r} has dim {m.dim}, state has dim {self.psi.dim}")
            if abs(np.vdot(self.psi.amplitudes, m.vector)) > 1e-10:
                raise ValidationError(f"meps {n!r} is not orthogonal to the state")
        for key, mop in self.exclusion_ops.items():
            if mop.dim != self.psi.dim:
                raise DimensionError(f"exclusion operator {key} has dim {mop.dim}")

    @property
    def dim(self) -> int:
        return self.psi.dim

    def pair(self, i: int = 0, j: int = 1) -> tuple[Observable, Observable]:
        try:
            return self.observables[i], self.observables[j]
        except IndexError:
            raise ValidationError(f"pair ({i},{j}) out of range for {len(self.observables)} observables") from None


# ------------------------------------------------------------ operators


def spin_matrices(spin: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin operators ``(Jx, Jy, Jz)`` with hbar = 1, basis ordered by decreasing m."""
    mult = int(round(2 * spin + 1))
    m = spin - np.arange(mult)
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1))
    jp = np.diag(np.sqrt(spin * (spin + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAPER4_A = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]], dtype=complex)
PAPER4_B = np.array([[1, -1j, 0, 0], [1j, -1, 0, 0], [0, 0, 0, -1j], [0, 0, 1j, 0]], dtype=complex)


def printed_meps_vectors() -> dict[str, np.ndarray]:
    """Unnormalized MEPS vectors of the 4-dim example at theta = pi/3."""
    s3, s7 = math.sqrt(3), math.sqrt(7)
    return {
        "psi_perp_1": np.array([2 - s7 + s3 * 1j, math.sqrt(21) - 2 * s3 - 3j, 0, 0]),
        "psi_perp_2": np.array([2 - math.sqrt(14) + s3 * 1j, math.sqrt(42) - 2 * s3 - 3j, 0, 0]),
    }


# -------------------------------------------------------------- builtins


def paper_4dim_scenario(theta: float = math.pi / 3) -> Scenario:
    """4-dim example with ``|psi> = cos(theta/2)|0> + sin(theta/2)|1>``, ``0 <= theta < pi/2``.

    Named MEPS ``psi_perp_1`` / ``psi_perp_2`` are the normalized
    ``(A_hat/dA + i sqrt(lam) B_hat/dB)|psi>`` for ``lam = 1`` and ``1/2``; at
    ``theta = pi/3`` these are the printed closed-form vectors.
    """
    if not 0 <= theta < math.pi / 2:
        raise RangeError(f"theta must lie in [0, pi/2), got {theta!r}")
    psi = QuantumState(np.array([math.cos(theta / 2), math.sin(theta / 2), 0, 0], dtype=complex))
    a, b = Observable(PAPER4_A), Observable(PAPER4_B)
    st = pair_statistics(a, b, psi)
    meps = {}
    if theta == math.pi / 3:
        meps = {k: project_and_normalize(v, psi) for k, v in printed_meps_vectors().items()}
    else:
        ah, bh = hatted_image(a, psi) / st.std_a, hatted_image(b, psi) / st.std_b
        for name, lam in (("psi_perp_1", 1.0), ("psi_perp_2", 0.5)):
            # the image vanishes where Robertson is tight; leave that MEPS out
            try:
                meps[name] = project_and_normalize(ah + 1j * math.sqrt(lam) * bh, psi)
            except ZeroVectorError:
                pass
    return Scenario(
        "paper4dim",
        (a, b),
        psi,
        observable_names=("A", "B"),
        named_meps=meps,
        metadata={"theta": repr(theta)},
    )


def spin1_scenario(theta: float = 0.0) -> Scenario:
    """Spin-1 ``Lx, Ly, Lz`` with ``psi = cos t|1> - sin t|0>`` and ``psi_perp = sin t|1> + cos t|0>``."""
    lx, ly, lz = spin_matrices(1)
    c, s = math.cos(theta), math.sin(theta)
    psi = QuantumState(np.array([c, -s, 0], dtype=complex))
    perp = np.array([s, c, 0], dtype=complex)
    return Scenario(
        "spin1",
        (Observable(lx), Observable(ly), Observable(lz)),
        psi,
        observable_names=("Lx", "Ly", "Lz"),
        named_meps={"psi_perp": Meps(psi, perp)},
        metadata={"theta": repr(theta)},
    )


def pauli_scenario() -> Scenario:
    psi = QuantumState.basis(2, 0)
    return Scenario(
        "pauli",
        (Observable(SIGMA_X), Observable(SIGMA_Y), Observable(SIGMA_Z)),
        psi,
        observable_names=("X", "Y", "Z"),
        named_meps={"psi_perp": Meps(psi, np.array([0, 1], dtype=complex))},
    )


BUILTINS = {
    "paper4dim": paper_4dim_scenario,
    "spin1": spin1_scenario,
    "pauli": lambda: pauli_scenario(),
}


def builtin_scenario(text: str) -> Scenario:
    """Resolve ``NAME`` or ``NAME:THETA`` to a built-in scenario."""
    name, _, arg = text.partition(":")
    if name not in BUILTINS:
        raise ValidationError(f"unknown builtin scenario {name!r}; valid: {', '.join(BUILTINS)}")
    if not arg:
        return BUILTINS[name]()
    if name == "pauli":
        raise ValidationError("builtin 'pauli' takes no parameter")
    try:
        theta = float(arg)
    except ValueError:
        raise ValidationError(f"bad parameter {arg!r} for builtin {name!r}") from None
    return BUILTINS[name](theta)


# ---------------------------------------------------------- serialization


def _encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _encode_matrix(m) -> list:
    return [_encode_vector(row) for row in np.asarray(m)]


def scenario_to_dict(sc: Scenario) -> dict:
    doc = {
        "name": sc.name,
        "dim": sc.dim,
        "observables": [
            {"name": n, "matrix": _encode_matrix(o.matrix)} for n, o in zip(sc.observable_names, sc.observables)
        ],
        "state": _encode_vector(sc.psi.amplitudes),
    }
    if sc.named_meps:
        doc["meps"] = {k: _encode_vector(m.vector) for k, m in sc.named_meps.items()}
    if sc.exclusion_ops:
        doc["exclusion_operators"] = [
            {"pair": list(k), "matrix": _encode_matrix(m.matrix)} for k, m in sc.exclusion_ops.items()
        ]
    if sc.metadata:
        doc["metadata"] = dict(sc.metadata)
    return doc


def dumps(sc: Scenario) -> str:
    # json emits floats with repr(), the shortest string that round-trips exactly
    return json.dumps(scenario_to_dict(sc), indent=1)


def save_scenario(sc: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(sc))
        fh.write("\n")


def _decode_vector(raw, what: str, dim: int | None = None) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{what}: entries must be [re, im] number pairs") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError(f"{what}: expected a list of [re, im] pairs")
    v = arr[:, 0] + 1j * arr[:, 1]
    if dim is not None and v.size != dim:
        raise DimensionError(f"{what}: length {v.size}, expected dim {dim}")
    return v


def _decode_matrix(raw, what: str, dim: int) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{what}: entries must be [re, im] number pairs") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{what}: expected a dim x dim grid of [re, im] pairs")
    if arr.shape[:2] != (dim, dim):
        raise DimensionError(f"{what}: shape {arr.shape[:2]}, expected ({dim}, {dim})")
    return arr[..., 0] + 1j * arr[..., 1]


def _wrap(what: str, fn, *args):
    try:
        return fn(*args)
    except UncertaintyError as exc:
        raise type(exc)(f"{what}: {exc}") from None


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    for key in ("dim", "observables", "state"):
        if key not in doc:
            raise ParseError(f"missing required field {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 2:
        raise ValidationError(f"dim must be an integer >= 2, got {dim!r}")
    if not isinstance(doc["observables"], list) or not doc["observables"]:
        raise ParseError("observables must be a nonempty list")
    names, obs = [], []
    for i, entry in enumerate(doc["observables"]):
        if not isinstance(entry, dict) or "matrix" not in entry:
            raise ParseError(f"observables[{i}] must be an object with a 'matrix' field")
        name = str(entry.get("name", f"O{i}"))
        what = f"observable {name!r}"
        obs.append(_wrap(what, Observable, _decode_matrix(entry["matrix"], what, dim)))
        names.append(name)
    psi = _wrap("state", QuantumState, _decode_vector(doc["state"], "state", dim))
    meps = {}
    raw_meps = doc.get("meps", {})
    if not isinstance(raw_meps, dict):
        raise ParseError("meps must be an object mapping names to vectors")
    for name, raw in raw_meps.items():
        what = f"meps {name!r}"
        meps[name] = _wrap(what, Meps, psi, _decode_vector(raw, what, dim))
    ops = {}
    for i, entry in enumerate(doc.get("exclusion_operators", [])):
        try:
            key = tuple(int(x) for x in entry["pair"])
            raw = entry["matrix"]
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"exclusion_operators[{i}] needs 'pair' and 'matrix'") from None
        what = f"exclusion operator {key}"
        ops[key] = ExclusionOperator(_decode_matrix(raw, what, dim))
    metadata = {str(k): str(v) for k, v in doc.get("metadata", {}).items()}
    return Scenario(
        str(doc.get("name", "scenario")),
        tuple(obs),
        psi,
        observable_names=tuple(names),
        named_meps=meps,
        exclusion_ops=ops,
        metadata=metadata,
    )


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return scenario_from_dict(doc)


def load_scenario(source: str | os.PathLike | IO) -> Scenario:
    """Load and fully validate a scenario from a path, text stream or byte stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError("scenario file is not UTF-8 text") from None
    return loads(data)


def resolve_scenario(source: str) -> Scenario:
    """``builtin:NAME[:THETA]`` or a filesystem path."""
    if source.startswith("builtin:"):
        return builtin_scenario(source[len("builtin:"):])
    return load_scenario(source)


__all__ = [
    "Scenario",
    "paper_4dim_scenario",
    "spin1_scenario",
    "pauli_scenario",
    "builtin_scenario",
    "resolve_scenario",
    "load_scenario",
    "loads",
    "dumps",
    "save_scenario",
    "spin_matrices",
]
