"""Fixed gate vocabulary and the defining unitaries.

Two-qubit matrices use big-endian ordering over the operand list: operand 0
is the most significant bit of the 4-dim basis index. For controlled gates
operand 0 is the control and operand 1 the target, so every controlled gate
has the block form ``[[I, 0], [0, V]]``.
"""
from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

_S2 = 1 / np.sqrt(2)
_T = np.exp(1j * np.pi / 4)

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _S2
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


def _controlled(v: np.ndarray) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = v
    return u


class GateKind(str, enum.Enum):
    """The 22 non-parametric gate kinds a circuit may contain."""

    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    T = "t"
    ID = "id"
    SXDG = "sxdg"
    SDG = "sdg"
    SX = "sx"
    TDG = "tdg"
    CX = "cx"
    CY = "cy"
    CZ = "cz"
    SWAP = "swap"
    DCX = "dcx"
    ISWAP = "iswap"
    CSDG = "csdg"
    ECR = "ecr"
    CH = "ch"
    CS = "cs"
    CSX = "csx"

    @property
    def arity(self) -> int:
        return 2 if self in TWO_QUBIT_KINDS else 1

    @property
    def index(self) -> int:
        """Position in the vocabulary, stable across runs."""
        return ALL_KINDS.index(self)

    @property
    def unitary(self) -> np.ndarray:
        return gate_unitary(self)

    def __str__(self) -> str:
        return self.value


ALL_KINDS: tuple[GateKind, ...] = tuple(GateKind)
ONE_QUBIT_KINDS: tuple[GateKind, ...] = ALL_KINDS[:11]
TWO_QUBIT_KINDS: frozenset[GateKind] = frozenset(ALL_KINDS[11:])


def _build_table() -> dict[GateKind, np.ndarray]:
    cx = _controlled(_X)
    cx_rev = np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
    )
    return {
        GateKind.X: _X,
        GateKind.Y: _Y,
        GateKind.Z: _Z,
        GateKind.H: _H,
        GateKind.S: _S,
        GateKind.T: np.diag([1, _T]),
        GateKind.ID: _I2,
        GateKind.SXDG: _SX.conj().T,
        GateKind.SDG: _S.conj().T,
        GateKind.SX: _SX,
        GateKind.TDG: np.diag([1, np.conj(_T)]),
        GateKind.CX: cx,
        GateKind.CY: _controlled(_Y),
        GateKind.CZ: _controlled(_Z),
        GateKind.SWAP: np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
        ),
        # cx(0,1) followed by cx(1,0)
        GateKind.DCX: cx_rev @ cx,
        GateKind.ISWAP: np.array(
            [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
        ),
        GateKind.CSDG: _controlled(_S.conj().T),
        # (X (x) I - Y (x) X) / sqrt(2): operand 0 carries the X/Y factor
        GateKind.ECR: _S2 * (np.kron(_X, _I2) - np.kron(_Y, _X)),
        GateKind.CH: _controlled(_H),
        GateKind.CS: _controlled(_S),
        GateKind.CSX: _controlled(_SX),
    }


_TABLE = _build_table()
for _m in _TABLE.values():
    _m.setflags(write=False)


def gate_unitary(kind: GateKind | str) -> np.ndarray:
    """Return the (read-only) defining matrix of ``kind``."""
    return _TABLE[GateKind(kind)]


@lru_cache(maxsize=None)
def kind_from_name(name: str) -> GateKind:
    try:
        return GateKind(name)
    except ValueError:
        raise ValueError(f"unknown gate kind {name!r}") from None
