"""Many-body bases and sparse operator matrices for 1D lattice models.

Three kinds of basis are supported:

``spin_half``
    Spin-1/2 chain.  A state is a bit string ``s_0 s_1 ... s_{L-1}`` with
    ``s_j = 0`` for spin up (``S^z = +1/2``) and ``s_j = 1`` for spin down.
    Site 0 is the most significant bit, so integer order of the codes is
    lexicographic order of the bit strings: ``|uu>, |ud>, |du>, |dd>`` for two
    sites.

``fermion_spinful``
    Spin-1/2 fermions.  A state is the occupation string of the ``2L`` modes
    ``(up_0 .. up_{L-1}, down_0 .. down_{L-1})``, mode 0 most significant.  The
    state is ``c^dag_{m1} c^dag_{m2} ... |0>`` with ``m1 < m2 < ...``, which fixes
    the Jordan-Wigner signs.

``boson_cutoff``
    Bosons with at most ``cutoff`` particles per site.  A state is the occupation
    string ``n_0 n_1 ... n_{L-1}`` read as a base ``cutoff + 1`` integer.

In all cases the basis is the sorted array of integer codes, which makes the
enumeration reproducible and lets operators locate target states with
``searchsorted``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np
import scipy.sparse as sp

HERMITIAN_TOL = 1e-12

BASIS_KINDS = ("spin_half", "fermion_spinful", "boson_cutoff")


class BasisError(ValueError):
    """Inconsistent basis request (sector does not fit the lattice)."""


@dataclass(frozen=True, eq=False)
class BasisDescriptor:
    kind: str
    sites: int
    n_up: Optional[int] = None
    n_down: Optional[int] = None
    n_particles: Optional[int] = None
    cutoff: Optional[int] = None
    codes: np.ndarray = field(repr=False, default=None)

    @property
    def dimension(self) -> int:
        return int(self.codes.size)

    @property
    def modes(self) -> int:
        return 2 * self.sites if self.kind == "fermion_spinful" else self.sites

    def index_of(self, codes: np.ndarray) -> np.ndarray:
        """Basis indices of ``codes``; -1 where a code is not in the basis."""
        codes = np.asarray(codes, dtype=np.int64)
        idx = np.searchsorted(self.codes, codes)
        idx = np.clip(idx, 0, self.dimension - 1)
        return np.where(self.codes[idx] == codes, idx, -1)

    def occupations(self) -> np.ndarray:
        """Occupation table of shape (dimension, modes), leftmost mode first."""
        if self.kind == "boson_cutoff":
            base = self.cutoff + 1
            powers = base ** np.arange(self.sites - 1, -1, -1, dtype=np.int64)
            return (self.codes[:, None] // powers[None, :]) % base
        shifts = np.arange(self.modes - 1, -1, -1, dtype=np.int64)
        return (self.codes[:, None] >> shifts[None, :]) & 1

    def same_as(self, other: "BasisDescriptor") -> bool:
        return (
            self is other
            or (
                self.kind == other.kind
                and self.sites == other.sites
                and self.dimension == other.dimension
                and np.array_equal(self.codes, other.codes)
            )
        )

    def sector_label(self) -> str:
        if self.kind == "spin_half":
            return f"spin_half(L={self.sites})"
        if self.kind == "fermion_spinful":
            if self.n_up is not None:
                return f"fermion(L={self.sites}, Nup={self.n_up}, Ndn={self.n_down})"
            return f"fermion(L={self.sites}, N={self.n_particles})"
        return f"boson(L={self.sites}, N={self.n_particles}, cutoff={self.cutoff})"


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(x, dtype=np.int64)).astype(np.int64)


def _boson_codes(sites: int, n: Optional[int], cutoff: int) -> np.ndarray:
    base = cutoff + 1
    if n is None:
        return np.arange(base**sites, dtype=np.int64)

    # compositions of n into `sites` parts <= cutoff, in lexicographic order
    def compositions(remaining: int, slots: int):
        if slots == 1:
            if remaining <= cutoff:
                yield (remaining,)
            return
        for k in range(min(remaining, cutoff) + 1):
            for rest in compositions(remaining - k, slots - 1):
                yield (k,) + rest

    occ = list(compositions(n, sites))
    if not occ:
        return np.zeros(0, dtype=np.int64)
    powers = base ** np.arange(sites - 1, -1, -1, dtype=np.int64)
    return np.asarray(occ, dtype=np.int64) @ powers


def make_basis(
    kind: str,
    sites: int,
    *,
    n_up: Optional[int] = None,
    n_down: Optional[int] = None,
    n_particles: Optional[int] = None,
    cutoff: Optional[int] = None,
) -> BasisDescriptor:
    """Enumerate a basis.

    Fermion sectors are given either as ``(n_up, n_down)`` or as a total
    ``n_particles`` (all spin splittings).  Boson sectors need ``n_particles``
    and/or ``cutoff``; the cutoff defaults to ``n_particles``, which is exact.
    """
    if kind not in BASIS_KINDS:
        raise BasisError(f"unknown basis kind {kind!r}; expected one of {BASIS_KINDS}")
    if not isinstance(sites, (int, np.integer)) or sites < 1:
        raise BasisError(f"sites must be a positive integer, got {sites!r}")
    sites = int(sites)

    if kind == "spin_half":
        if any(v is not None for v in (n_up, n_down, n_particles, cutoff)):
            raise BasisError("spin_half basis takes no particle-number sector")
        codes = np.arange(2**sites, dtype=np.int64)
        return BasisDescriptor(kind, sites, codes=codes)

    if kind == "fermion_spinful":
        if cutoff is not None:
            raise BasisError("fermion basis takes no boson cutoff")
        if (n_up is None) != (n_down is None):
            raise BasisError("give both n_up and n_down, or neither")
        if n_up is not None:
            if n_particles is not None and n_particles != n_up + n_down:
                raise BasisError(
                    f"n_particles={n_particles} inconsistent with n_up+n_down={n_up + n_down}"
                )
            for name, v in (("n_up", n_up), ("n_down", n_down)):
                if not 0 <= v <= sites:
                    raise BasisError(f"{name}={v} does not fit on {sites} sites")
        elif n_particles is not None and not 0 <= n_particles <= 2 * sites:
            raise BasisError(
                f"N={n_particles} exceeds fermion capacity {2 * sites} of {sites} sites"
            )
        modes = 2 * sites
        if n_up is not None:
            up = [sum(1 << (modes - 1 - j) for j in c) for c in itertools.combinations(range(sites), n_up)]
            dn = [sum(1 << (sites - 1 - j) for j in c) for c in itertools.combinations(range(sites), n_down)]
            codes = np.sort(np.add.outer(np.asarray(up, np.int64), np.asarray(dn, np.int64)).ravel())
            n_particles = n_up + n_down
        elif n_particles is not None:
            codes = np.sort(
                np.asarray(
                    [sum(1 << (modes - 1 - m) for m in c) for c in itertools.combinations(range(modes), n_particles)],
                    dtype=np.int64,
                )
            )
        else:
            codes = np.arange(2**modes, dtype=np.int64)
        return BasisDescriptor(kind, sites, n_up=n_up, n_down=n_down, n_particles=n_particles, codes=codes)

    # boson_cutoff
    if n_up is not None or n_down is not None:
        raise BasisError("boson basis takes no spin sector")
    if n_particles is None and cutoff is None:
        raise BasisError("boson basis needs n_particles or cutoff")
    if cutoff is None:
        cutoff = n_particles
    if cutoff < 0 or (n_particles is not None and n_particles < 0):
        raise BasisError("negative boson occupation")
    if n_particles is not None and n_particles > sites * cutoff:
        raise BasisError(
            f"N={n_particles} exceeds capacity sites*cutoff={sites * cutoff}; raise the cutoff"
        )
    codes = _boson_codes(sites, n_particles, cutoff)
    return BasisDescriptor(kind, sites, n_particles=n_particles, cutoff=cutoff, codes=codes)


def build_basis(spec) -> BasisDescriptor:
    """Basis for a :class:`pairmaxwell.models.ModelSpec`."""
    if spec.family == "tfim":
        return make_basis("spin_half", spec.sites)
    if spec.family == "fermi_hubbard":
        return make_basis(
            "fermion_spinful", spec.sites, n_up=spec.n_up, n_down=spec.n_down, n_particles=spec.n_particles
        )
    if spec.family == "bose_hubbard":
        return make_basis("boson_cutoff", spec.sites, n_particles=spec.n_particles, cutoff=spec.boson_cutoff)
    raise BasisError(f"unknown model family {spec.family!r}")


# --------------------------------------------------------------------------
# operators

@dataclass(frozen=True)
class Term:
    """A single lattice term.

    kinds: ``sx``, ``sz`` (site j); ``szsz`` (sites i, j); ``hop`` (fermions,
    sites i, j, spin 'up'/'down'; c^dag_i c_j + h.c.); ``double_occ`` (n_up n_down
    at j); ``number`` (fermion n_{j,spin} or boson n_j); ``bhop`` (b^dag_i b_j +
    h.c.); ``n2`` ((b^dag_j b_j)^2); ``pair`` (n_j (n_j - 1) / 2).
    """

    kind: str
    sites: tuple
    spin: Optional[str] = None
    coefficient: float = 1.0


_TERM_BASIS = {
    "sx": "spin_half",
    "sz": "spin_half",
    "szsz": "spin_half",
    "hop": "fermion_spinful",
    "double_occ": "fermion_spinful",
    "bhop": "boson_cutoff",
    "n2": "boson_cutoff",
    "pair": "boson_cutoff",
}


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    basis: BasisDescriptor
    matrix: sp.csr_matrix = field(repr=False)
    label: str = ""

    @property
    def shape(self):
        return self.matrix.shape

    def hermiticity_error(self) -> float:
        return hermiticity_error(self.matrix)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def hermiticity_error(m) -> float:
    d = (m - m.T.conj()).tocoo() if sp.issparse(m) else np.asarray(m) - np.asarray(m).T.conj()
    if sp.issparse(d):
        return float(np.max(np.abs(d.data))) if d.nnz else 0.0
    return float(np.max(np.abs(d))) if d.size else 0.0


def _csr(rows, cols, vals, dim) -> sp.csr_matrix:
    m = sp.coo_matrix(
        (np.asarray(vals, dtype=float), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(dim, dim),
    ).tocsr()
    m.sum_duplicates()
    m.sort_indices()
    m.eliminate_zeros()
    return m


def _mode(basis: BasisDescriptor, site: int, spin: str) -> int:
    if spin not in ("up", "down"):
        raise ValueError(f"spin must be 'up' or 'down', got {spin!r}")
    return site if spin == "up" else basis.sites + site


def _fermion_hop(basis: BasisDescriptor, i: int, j: int, spin: str):
    """Matrix elements of c^dag_{i,s} c_{j,s} (no h.c.), Jordan-Wigner signed."""
    M = basis.modes
    mi, mj = _mode(basis, i, spin), _mode(basis, j, spin)
    bi, bj = np.int64(1) << (M - 1 - mi), np.int64(1) << (M - 1 - mj)
    codes = basis.codes
    ok = ((codes & bj) != 0) & ((codes & bi) == 0)
    src = np.nonzero(ok)[0]
    c = codes[src]
    # fermions sitting in modes left of m (higher bits)
    sign = (-1.0) ** _popcount(c >> (M - mj))
    c1 = c ^ bj
    sign = sign * (-1.0) ** _popcount(c1 >> (M - mi))
    dst = basis.index_of(c1 ^ bi)
    keep = dst >= 0
    return dst[keep], src[keep], sign[keep]


def _boson_hop(basis: BasisDescriptor, i: int, j: int):
    """Matrix elements of b^dag_i b_j (no h.c.)."""
    occ = basis.occupations()
    base = basis.cutoff + 1
    ni, nj = occ[:, i], occ[:, j]
    ok = (nj > 0) & (ni < basis.cutoff)
    src = np.nonzero(ok)[0]
    pi, pj = base ** (basis.sites - 1 - i), base ** (basis.sites - 1 - j)
    new = basis.codes[src] + pi - pj
    amp = np.sqrt(nj[src] * (ni[src] + 1.0))
    dst = basis.index_of(new)
    keep = dst >= 0
    return dst[keep], src[keep], amp[keep]


def build_operator(term: Term, basis: BasisDescriptor) -> OperatorMatrix:
    """Sparse Hermitian matrix of ``term`` over ``basis``."""
    want = _TERM_BASIS.get(term.kind)
    if term.kind == "number":
        want = basis.kind if basis.kind in ("fermion_spinful", "boson_cutoff") else None
        if want is None:
            raise ValueError("number operator needs a fermion or boson basis")
    if want is None:
        raise ValueError(f"unknown term kind {term.kind!r}")
    if want != basis.kind:
        raise ValueError(f"term {term.kind!r} acts on {want} bases, not {basis.kind}")
    for s in term.sites:
        if not 0 <= s < basis.sites:
            raise ValueError(f"site {s} outside lattice of {basis.sites} sites")

    dim = basis.dimension
    diag_idx = np.arange(dim)
    k = term.kind
    if k in ("sz", "szsz", "double_occ", "number", "n2", "pair"):
        occ = basis.occupations()
        if k == "sz":
            vals = 0.5 - occ[:, term.sites[0]]
        elif k == "szsz":
            i, j = term.sites
            vals = (0.5 - occ[:, i]) * (0.5 - occ[:, j])
        elif k == "double_occ":
            j = term.sites[0]
            vals = occ[:, _mode(basis, j, "up")] * occ[:, _mode(basis, j, "down")]
        elif k == "number":
            j = term.sites[0]
            vals = occ[:, _mode(basis, j, term.spin)] if basis.kind == "fermion_spinful" else occ[:, j]
        elif k == "n2":
            vals = occ[:, term.sites[0]] ** 2
        else:
            n = occ[:, term.sites[0]]
            vals = n * (n - 1) / 2.0
        m = _csr(diag_idx, diag_idx, term.coefficient * np.asarray(vals, float), dim)
    elif k == "sx":
        bit = np.int64(1) << (basis.sites - 1 - term.sites[0])
        dst = basis.index_of(basis.codes ^ bit)
        m = _csr(dst, diag_idx, np.full(dim, 0.5 * term.coefficient), dim)
    elif k in ("hop", "bhop"):
        i, j = term.sites
        if i == j:
            raise ValueError("hopping needs two distinct sites")
        if k == "hop":
            if term.spin is None:
                raise ValueError("fermion hopping needs spin='up' or 'down'")
            r, c, v = _fermion_hop(basis, i, j, term.spin)
        else:
            r, c, v = _boson_hop(basis, i, j)
        v = term.coefficient * v
        m = _csr(np.concatenate([r, c]), np.concatenate([c, r]), np.concatenate([v, v]), dim)
    else:  # pragma: no cover
        raise ValueError(k)

    err = hermiticity_error(m)
    if err >= HERMITIAN_TOL:
        raise ArithmeticError(f"{k} on {term.sites}: non-Hermitian by {err:.3e}")
    label = f"{k}{tuple(term.sites)}" + (f"[{term.spin}]" if term.spin else "")
    return OperatorMatrix(basis, m, label)


def operator_sum(parts, basis: BasisDescriptor, label: str) -> OperatorMatrix:
    """Sum of ``(coefficient, OperatorMatrix)`` pairs on one basis."""
    total = sp.csr_matrix((basis.dimension, basis.dimension))
    for coef, op in parts:
        if not op.basis.same_as(basis):
            raise ValueError(f"operator {op.label!r} lives on a different basis")
        total = total + coef * op.matrix
    total = sp.csr_matrix(total)
    total.sum_duplicates()
    total.sort_indices()
    return OperatorMatrix(basis, total, label)


def annihilator(basis: BasisDescriptor, site: int, spin: str) -> sp.csr_matrix:
    """c_{site,spin} on an unconstrained fermion basis (not Hermitian)."""
    if basis.kind != "fermion_spinful" or basis.n_particles is not None:
        raise ValueError("annihilator needs the full (sector-free) fermion basis")
    M = basis.modes
    m = _mode(basis, site, spin)
    bit = np.int64(1) << (M - 1 - m)
    src = np.nonzero(basis.codes & bit)[0]
    c = basis.codes[src]
    sign = (-1.0) ** _popcount(c >> (M - m))
    dst = basis.index_of(c ^ bit)
    return _csr(dst, src, sign, basis.dimension)


def spin_flip_parity(basis: BasisDescriptor) -> sp.csr_matrix:
    """prod_j (2 S^x_j): flips every spin."""
    if basis.kind != "spin_half":
        raise ValueError("spin-flip parity needs a spin_half basis")
    mask = np.int64((1 << basis.sites) - 1)
    dst = basis.index_of(basis.codes ^ mask)
    return _csr(dst, np.arange(basis.dimension), np.ones(basis.dimension), basis.dimension)


def expected_dimension(kind: str, sites: int, n_up=None, n_down=None, n_particles=None, cutoff=None) -> int:
    """Closed-form sector dimension (used as an oracle in tests)."""
    if kind == "spin_half":
        return 2**sites
    if kind == "fermion_spinful":
        if n_up is not None:
            return comb(sites, n_up) * comb(sites, n_down)
        if n_particles is not None:
            return comb(2 * sites, n_particles)
        return 4**sites
    if n_particles is None:
        return (cutoff + 1) ** sites
    # inclusion-exclusion over sites exceeding the cutoff
    total = 0
    for k in range(sites + 1):
        rem = n_particles - k * (cutoff + 1)
        if rem < 0:
            break
        total += (-1) ** k * comb(sites, k) * comb(rem + sites - 1, sites - 1)
    return total
