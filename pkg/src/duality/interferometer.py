"""Two-way interferometer with a quantum which-way marker (WWM).

The device is modeled in the quanton's sigma_z basis (index 0 corresponds to
sigma_z = +1).  The beam splitter and the marker interaction are absorbed into
a single joint operator built from four blocks acting on the marker space,

    U = (1/sqrt(2)) [[ V++  V+- ]
                     [ -V-+ V-- ]],

and the joint state evolves as rho -> U^dagger rho U.  A phase shifter
exp(-i phi sigma_z / 2) and a beam merger exp(-i pi sigma_y / 4) then act on
the quanton factor alone (as ordinary conjugations).  The two "ways" live at
the central stage of the device; after the merger they are read out by the
(1 +- sigma_x)/2 projectors.

Sign conventions are pinned by the requirement that identity blocks with a
fully polarized quanton (s = 1) give unit fringe visibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DegenerateBranchError, ValidationError
from .linalg import SIGMA_X, VALIDATION_ATOL

# Branch weights below this are treated as zero-probability ways.
DEGENERATE_WEIGHT = 1e-12


def _frozen_array(a) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class WwmBlocks:
    """The four marker-space blocks of the joint beam-splitter/marker operator."""

    vpp: np.ndarray
    vpm: np.ndarray
    vmp: np.ndarray
    vmm: np.ndarray

    def __post_init__(self):
        mats = [linalg.as_square(m, name) for m, name in
                zip((self.vpp, self.vpm, self.vmp, self.vmm), ("vpp", "vpm", "vmp", "vmm"))]
        n = mats[0].shape[0]
        if any(m.shape[0] != n for m in mats):
            raise ValidationError("all four blocks must share the same dimension")
        for name, m in zip(("vpp", "vpm", "vmp", "vmm"), mats):
            object.__setattr__(self, name, _frozen_array(m))

    @property
    def n(self) -> int:
        return self.vpp.shape[0]


@dataclass(frozen=True)
class InterferometerInstance:
    """A complete interferometer configuration.

    ``s`` is the quanton inversion (initial state diag((1+s)/2, (1-s)/2));
    the closed interval [-1, 1] is admitted since the fully polarized
    endpoints are the pure-preparation cases used throughout.  ``rho_d0`` is
    the marker's initial density matrix and ``phi`` the phase-shifter angle.
    """

    s: float
    blocks: WwmBlocks
    rho_d0: np.ndarray
    phi: float = 0.0

    def __post_init__(self):
        if not -1.0 <= self.s <= 1.0:
            raise ValidationError(f"inversion s must lie in [-1, 1], got {self.s}")
        rho = linalg.require_density(self.rho_d0, "rho_d0")
        if rho.shape[0] != self.blocks.n:
            raise ValidationError(
                f"rho_d0 dimension {rho.shape[0]} does not match block dimension {self.blocks.n}")
        object.__setattr__(self, "rho_d0", _frozen_array(rho))

    @property
    def n(self) -> int:
        return self.blocks.n

    def to_dict(self) -> dict:
        """Serialize to the documented JSON schema (row-major [re, im] pairs)."""
        return {
            "s": float(self.s),
            "phi": float(self.phi),
            "n": self.n,
            "rho_d0": matrix_to_pairs(self.rho_d0),
            "blocks": {
                "vpp": matrix_to_pairs(self.blocks.vpp),
                "vpm": matrix_to_pairs(self.blocks.vpm),
                "vmp": matrix_to_pairs(self.blocks.vmp),
                "vmm": matrix_to_pairs(self.blocks.vmm),
            },
        }


@dataclass(frozen=True)
class EvolutionResult:
    """Output-port data for one instance.

    ``w_plus``/``w_minus`` are the way probabilities, ``c_up``/``c_down`` the
    per-branch contrast factors, ``c`` their inversion-weighted combination,
    and ``bloch_final`` the quanton Bloch vector (x, y, z) after the merger.
    """

    rho_final: np.ndarray
    w_plus: float
    w_minus: float
    c_up: complex
    c_down: complex
    c: complex
    bloch_final: np.ndarray = field(repr=False)


def matrix_to_pairs(m) -> list:
    a = linalg.as_square(m)
    return [[float(z.real), float(z.imag)] for z in a.reshape(-1)]


def matrix_from_pairs(pairs, n: int, name: str = "matrix") -> np.ndarray:
    flat = np.asarray(pairs, dtype=float)
    if flat.shape != (n * n, 2):
        raise ValidationError(f"{name} must be a list of {n * n} [re, im] pairs")
    return (flat[:, 0] + 1j * flat[:, 1]).reshape(n, n)


def instance_from_dict(d: dict) -> InterferometerInstance:
    """Deserialize an instance from the documented JSON schema."""
    try:
        n = int(d["n"])
        s = float(d["s"])
        phi = float(d["phi"])
        rho = matrix_from_pairs(d["rho_d0"], n, "rho_d0")
        b = d["blocks"]
        blocks = WwmBlocks(
            vpp=matrix_from_pairs(b["vpp"], n, "vpp"),
            vpm=matrix_from_pairs(b["vpm"], n, "vpm"),
            vmp=matrix_from_pairs(b["vmp"], n, "vmp"),
            vmm=matrix_from_pairs(b["vmm"], n, "vmm"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed instance object: {exc}") from exc
    return InterferometerInstance(s=s, blocks=blocks, rho_d0=rho, phi=phi)


def assemble_global_unitary(blocks: WwmBlocks) -> np.ndarray:
    """Assemble the joint 2n x 2n operator from the four marker blocks.

    Unitarity is not asserted here; see :func:`validate_unitarity`.
    """
    top = np.hstack([blocks.vpp, blocks.vpm])
    bottom = np.hstack([-blocks.vmp, blocks.vmm])
    return np.vstack([top, bottom]) / math.sqrt(2.0)


def validate_unitarity(blocks: WwmBlocks) -> bool:
    """True iff the assembled joint operator is unitary within 1e-10."""
    return linalg.is_unitary(assemble_global_unitary(blocks), VALIDATION_ATOL)


def from_unitary_pair(u_plus, u_minus) -> WwmBlocks:
    """Blocks for a symmetric beam splitter followed by a way-controlled
    unitary marker coupling (U+ on the + way, U- on the - way)."""
    up = linalg.as_square(u_plus, "u_plus")
    um = linalg.as_square(u_minus, "u_minus")
    if up.shape != um.shape:
        raise ValidationError("u_plus and u_minus must share the same dimension")
    for name, u in (("u_plus", up), ("u_minus", um)):
        if not linalg.is_unitary(u):
            raise ValidationError(f"{name} is not unitary within {VALIDATION_ATOL:.0e}")
    return WwmBlocks(vpp=up, vpm=um, vmp=up, vmm=um)


def from_tilted_pair(theta: float, u_plus, u_minus) -> WwmBlocks:
    """Blocks for an asymmetric beam splitter (mixing angle ``theta``) followed
    by a way-controlled unitary coupling.

    The way probabilities are cos(theta)^2 and sin(theta)^2 for a fully
    polarized quanton, independent of the marker state, so the predictability
    is |cos(2 theta)| by construction.  theta = pi/4 recovers
    :func:`from_unitary_pair`.
    """
    up = linalg.as_square(u_plus, "u_plus")
    um = linalg.as_square(u_minus, "u_minus")
    if up.shape != um.shape:
        raise ValidationError("u_plus and u_minus must share the same dimension")
    for name, u in (("u_plus", up), ("u_minus", um)):
        if not linalg.is_unitary(u):
            raise ValidationError(f"{name} is not unitary within {VALIDATION_ATOL:.0e}")
    c = math.sqrt(2.0) * math.cos(theta)
    d = math.sqrt(2.0) * math.sin(theta)
    return WwmBlocks(vpp=c * up, vpm=d * um, vmp=d * up, vmm=c * um)


def from_global_unitary(u) -> WwmBlocks:
    """Invert :func:`assemble_global_unitary` for a given joint unitary."""
    a = linalg.as_square(u, "u")
    if a.shape[0] % 2 != 0:
        raise ValidationError(f"joint operator must have even dimension, got {a.shape[0]}")
    if not linalg.is_unitary(a):
        raise ValidationError(f"joint operator is not unitary within {VALIDATION_ATOL:.0e}")
    n = a.shape[0] // 2
    s2 = math.sqrt(2.0)
    return WwmBlocks(
        vpp=s2 * a[:n, :n],
        vpm=s2 * a[:n, n:],
        vmp=-s2 * a[n:, :n],
        vmm=s2 * a[n:, n:],
    )


def way_operators(blocks: WwmBlocks, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Marker-space operators whose expectations in rho_d0 are the way
    probabilities w+ and w-."""
    wp = (1.0 + s) / 4.0 * (blocks.vpp @ blocks.vpp.conj().T) \
        + (1.0 - s) / 4.0 * (blocks.vmp @ blocks.vmp.conj().T)
    wm = (1.0 + s) / 4.0 * (blocks.vpm @ blocks.vpm.conj().T) \
        + (1.0 - s) / 4.0 * (blocks.vmm @ blocks.vmm.conj().T)
    return wp, wm


def phase_shifter(phi: float, n: int) -> np.ndarray:
    """exp(-i phi sigma_z / 2) on the quanton, identity on the marker."""
    quanton = np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])
    return np.kron(quanton, np.eye(n))


def beam_merger(n: int) -> np.ndarray:
    """exp(-i pi sigma_y / 4) on the quanton, identity on the marker."""
    r = 1.0 / math.sqrt(2.0)
    quanton = np.array([[r, -r], [r, r]], dtype=complex)
    return np.kron(quanton, np.eye(n))


def contrast_factors(inst: InterferometerInstance) -> tuple[complex, complex, complex]:
    """Per-branch contrast factors and their inversion-weighted combination."""
    b = inst.blocks
    c_up = complex(np.trace(inst.rho_d0 @ (b.vpm @ b.vpp.conj().T)))
    c_down = -complex(np.trace(inst.rho_d0 @ (b.vmm @ b.vmp.conj().T)))
    c = (1.0 + inst.s) / 2.0 * c_up + (1.0 - inst.s) / 2.0 * c_down
    return c_up, c_down, c


def evolve(inst: InterferometerInstance) -> EvolutionResult:
    """Run the instance through splitter+marker, phase shifter, and merger.

    The final joint state is computed by the direct matrix route; the way
    probabilities, contrast factors, and final Bloch vector come from their
    closed-form expressions in the blocks.  Cheap structural postconditions
    (probability normalization, Bloch norm, final-state validity) are enforced.
    """
    n = inst.n
    if not validate_unitarity(inst.blocks):
        raise ValidationError("assembled joint operator is not unitary within 1e-10")

    u = assemble_global_unitary(inst.blocks)
    rho_q0 = np.diag([(1.0 + inst.s) / 2.0, (1.0 - inst.s) / 2.0]).astype(complex)
    rho = np.kron(rho_q0, inst.rho_d0)
    rho = u.conj().T @ rho @ u
    ps = phase_shifter(inst.phi, n)
    rho = ps @ rho @ ps.conj().T
    bm = beam_merger(n)
    rho_final = bm @ rho @ bm.conj().T

    wp_op, wm_op = way_operators(inst.blocks, inst.s)
    w_plus = float(np.trace(inst.rho_d0 @ wp_op).real)
    w_minus = float(np.trace(inst.rho_d0 @ wm_op).real)
    if abs(w_plus + w_minus - 1.0) > VALIDATION_ATOL:
        raise ValidationError(f"way probabilities do not sum to one: {w_plus + w_minus!r}")

    c_up, c_down, c = contrast_factors(inst)
    zy = -np.exp(-1j * inst.phi) * c
    bloch = np.array([w_plus - w_minus, zy.imag, zy.real])
    if np.linalg.norm(bloch) > 1.0 + VALIDATION_ATOL:
        raise ValidationError("final Bloch vector exceeds unit norm beyond tolerance")
    linalg.require_density(rho_final, "rho_final")

    return EvolutionResult(
        rho_final=_frozen_array(rho_final),
        w_plus=w_plus,
        w_minus=w_minus,
        c_up=c_up,
        c_down=c_down,
        c=c,
        bloch_final=bloch,
    )


def conditional_wwm_states(
    inst: InterferometerInstance,
) -> tuple[float, np.ndarray, float, np.ndarray]:
    """Way probabilities and the marker states conditioned on each way.

    Returns ``(w_plus, rho_plus, w_minus, rho_minus)`` with the conditional
    states normalized to unit trace.  Raises :class:`DegenerateBranchError`
    when either way has (numerically) zero probability, since the conditional
    state on that branch is undefined.
    """
    b = inst.blocks
    a = (1.0 + inst.s) / 4.0
    bb = (1.0 - inst.s) / 4.0
    wp_rho = a * (b.vpp.conj().T @ inst.rho_d0 @ b.vpp) + bb * (b.vmp.conj().T @ inst.rho_d0 @ b.vmp)
    wm_rho = a * (b.vpm.conj().T @ inst.rho_d0 @ b.vpm) + bb * (b.vmm.conj().T @ inst.rho_d0 @ b.vmm)
    w_plus = float(np.trace(wp_rho).real)
    w_minus = float(np.trace(wm_rho).real)
    if w_plus < DEGENERATE_WEIGHT or w_minus < DEGENERATE_WEIGHT:
        raise DegenerateBranchError(
            f"degenerate branch: w+ = {w_plus!r}, w- = {w_minus!r}")
    return w_plus, wp_rho / w_plus, w_minus, wm_rho / w_minus


def visibility(res: EvolutionResult) -> float:
    """Fringe visibility, the modulus of the combined contrast factor."""
    return abs(res.c)


def predictability(res: EvolutionResult) -> float:
    """A-priori which-way knowledge |w+ - w-|."""
    return abs(res.w_plus - res.w_minus)


def upper_port_probability(inst: InterferometerInstance, phi: float) -> float:
    """Probability of the quanton's upper output state at phase ``phi``.

    Convenience for fringe scans: re-evolves the instance at the given phase
    and projects the final state onto (1 + sigma_z)/2 on the quanton factor.
    """
    shifted = InterferometerInstance(s=inst.s, blocks=inst.blocks, rho_d0=inst.rho_d0, phi=phi)
    res = evolve(shifted)
    proj = np.kron((np.eye(2) + linalg.SIGMA_Z) / 2.0, np.eye(inst.n))
    return float(np.trace(proj @ res.rho_final).real)


def reduced_quanton_state(res: EvolutionResult, n: int) -> np.ndarray:
    """Partial trace of the final joint state over the marker."""
    return np.trace(res.rho_final.reshape(2, n, 2, n), axis1=1, axis2=3)


def conditional_states_from_final(res: EvolutionResult, n: int) -> tuple[float, np.ndarray, float, np.ndarray]:
    """Conditional marker states extracted projectively from the final joint
    state, used to cross-check :func:`conditional_wwm_states`."""
    out = []
    for sign in (+1.0, -1.0):
        proj = np.kron((np.eye(2) + sign * SIGMA_X) / 2.0, np.eye(n))
        sub = proj @ res.rho_final
        w_rho = np.trace(sub.reshape(2, n, 2, n), axis1=0, axis2=2)
        w = float(np.trace(w_rho).real)
        if w < DEGENERATE_WEIGHT:
            raise DegenerateBranchError(f"degenerate branch in projective extraction: w = {w!r}")
        out.extend([w, w_rho / w])
    return tuple(out)
