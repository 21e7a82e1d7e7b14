"""Lattice models written as ``H(c) = H0 + c * G2hat``.

Units: hbar = k_B = 1.  Spin operators are spin-1/2 (eigenvalues +-1/2).

* ``tfim``: ``H0 = h_x sum_j S^x_j``, ``G2hat = sum_j S^z_j S^z_{j+1}``; an
  optional longitudinal field adds ``h_z sum_j S^z_j``.  Ferromagnetic is c < 0.
* ``fermi_hubbard``: ``H0 = -t sum_{j,s} (c^dag_{j,s} c_{j+1,s} + h.c.)``,
  ``G2hat = sum_j n_{j,up} n_{j,down}``.
* ``bose_hubbard``: ``H0 = -t sum_j (b^dag_j b_{j+1} + h.c.)``, and
  ``G2hat = sum_j (b^dag_j b_j)^2`` (``bose_g2="n_squared"``) or the conventional
  ``sum_j n_j (n_j - 1) / 2`` (``bose_g2="standard"``).

Open boundaries are the default; ``boundary="periodic"`` adds the wrap bond.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .hilbert import (
    BasisDescriptor,
    OperatorMatrix,
    Term,
    build_basis,
    build_operator,
    operator_sum,
)

FAMILIES = ("tfim", "fermi_hubbard", "bose_hubbard")
DEFAULT_MAX_DIM = 4096


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    family: str
    sites: int
    t: float = 1.0
    h_x: float = 1.0
    h_z: float = 0.0
    c: float = 0.0
    n_up: Optional[int] = None
    n_down: Optional[int] = None
    n_particles: Optional[int] = None
    boson_cutoff: Optional[int] = None
    boundary: str = "open"
    bose_g2: str = "n_squared"
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ModelError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not isinstance(self.sites, int) or self.sites < 1:
            raise ModelError(f"sites must be a positive integer, got {self.sites!r}")
        if self.boundary not in ("open", "periodic"):
            raise ModelError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")
        if self.h_z != 0.0 and self.family != "tfim":
            raise ModelError("a longitudinal field h_z is only defined for the tfim family")
        if self.bose_g2 not in ("n_squared", "standard"):
            raise ModelError("bose_g2 must be 'n_squared' or 'standard'")
        if self.family == "bose_hubbard" and self.n_particles is None:
            raise ModelError("bose_hubbard needs n_particles")

    def with_(self, **changes) -> "ModelSpec":
        return replace(self, **changes)

    def bonds(self):
        L = self.sites
        bonds = [(j, j + 1) for j in range(L - 1)]
        if self.boundary == "periodic" and L > 2:
            bonds.append((L - 1, 0))
        return bonds

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class ModelOperators:
    spec: ModelSpec
    basis: BasisDescriptor
    H0: OperatorMatrix
    G2hat: OperatorMatrix
    hz_term: Optional[OperatorMatrix] = None
    observables: dict = field(default_factory=dict)


def build_model(spec: ModelSpec) -> ModelOperators:
    basis = build_basis(spec)
    if basis.dimension > spec.max_dim:
        raise ModelError(
            f"{basis.sector_label()} has dimension {basis.dimension} > cap {spec.max_dim}; "
            "use fewer sites or a smaller particle-number sector"
        )
    if basis.dimension == 0:
        raise ModelError(f"{basis.sector_label()} is empty")
    L = spec.sites
    bonds = spec.bonds()
    obs = {}

    if spec.family == "tfim":
        sx = operator_sum([(1.0, build_operator(Term("sx", (j,)), basis)) for j in range(L)], basis, "sx_total")
        sz = operator_sum([(1.0, build_operator(Term("sz", (j,)), basis)) for j in range(L)], basis, "sz_total")
        H0 = operator_sum([(spec.h_x, sx)], basis, "H0")
        G2 = operator_sum([(1.0, build_operator(Term("szsz", b), basis)) for b in bonds], basis, "G2")
        obs = {"sx_total": sx, "sz_total": sz}
        return ModelOperators(spec, basis, H0, G2, hz_term=sz, observables=obs)

    if spec.family == "fermi_hubbard":
        hops = [
            (-spec.t, build_operator(Term("hop", b, spin=s), basis))
            for b in bonds
            for s in ("up", "down")
        ]
        H0 = operator_sum(hops, basis, "H0")
        G2 = operator_sum(
            [(1.0, build_operator(Term("double_occ", (j,)), basis)) for j in range(L)], basis, "G2"
        )
        obs["n_total"] = operator_sum(
            [(1.0, build_operator(Term("number", (j,), spin=s), basis)) for j in range(L) for s in ("up", "down")],
            basis,
            "n_total",
        )
        return ModelOperators(spec, basis, H0, G2, observables=obs)

    hops = [(-spec.t, build_operator(Term("bhop", b), basis)) for b in bonds]
    H0 = operator_sum(hops, basis, "H0")
    kind = "n2" if spec.bose_g2 == "n_squared" else "pair"
    G2 = operator_sum([(1.0, build_operator(Term(kind, (j,)), basis)) for j in range(L)], basis, "G2")
    obs["n_total"] = operator_sum(
        [(1.0, build_operator(Term("number", (j,)), basis)) for j in range(L)], basis, "n_total"
    )
    return ModelOperators(spec, basis, H0, G2, observables=obs)


def hamiltonian_at(ops: ModelOperators, c: float, h_z: float = 0.0) -> OperatorMatrix:
    """``H0 + c G2hat + h_z sum_j S^z_j``."""
    if not ops.H0.basis.same_as(ops.G2hat.basis):
        raise ModelError("H0 and G2hat are built on different bases")
    parts = [(1.0, ops.H0), (float(c), ops.G2hat)]
    if h_z != 0.0:
        if ops.hz_term is None:
            raise ModelError(f"h_z is not defined for {ops.spec.family}")
        if not ops.hz_term.basis.same_as(ops.H0.basis):
            raise ModelError("h_z term is built on a different basis")
        parts.append((float(h_z), ops.hz_term))
    return operator_sum(parts, ops.basis, f"H(c={c:g}, h_z={h_z:g})")
