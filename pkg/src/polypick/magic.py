"""Two-variable inner building blocks and their composition trees.

A single building block is the rational inner function

    Phi_{s,eta}(z1, z2) = (s z1 + (1-s) z2 - eta z1 z2)
                          / (1 - ((1-s) z1 + s z2) eta),

with ``s in [0, 1]`` and ``|eta| = 1``.  It maps the bidisc into the disc,
fixes the diagonal, and degenerates to the coordinate projections at
``s in {0, 1}``.

The combining parameter that merges two disc points ``a != b`` is

    eta = -(conj(a) - conj(b)) / (a - b),

the unique unimodular value for which

    Phi_{s,eta}(lam m_a(lam), lam m_b(lam)) = lam m_{s a + (1-s) b}(lam)

holds identically.  Printed sign conventions for this parameter vary across
the literature; this one is pinned by the identity above, which the test
suite asserts on dense samples.  The equivalent closed form for two
variables appears in :func:`bidisc_coefficients`.

Binary trees of such blocks, together with per-coordinate input rotations,
represent the rational inner interpolants produced by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DegenerateCombination, DimensionMismatch, EqualAlphas
from .hyperbolic import require_in_disc, unimodular

_WEIGHT_ATOL = 1e-12


def magic_eval(s: float, eta: complex, z1, z2):
    """Evaluate the two-variable block; accepts scalars or numpy arrays."""
    num = s * z1 + (1.0 - s) * z2 - eta * z1 * z2
    den = 1.0 - ((1.0 - s) * z1 + s * z2) * eta
    return num / den


def eta_for(a: complex, b: complex) -> complex:
    """Unimodular combining parameter for two distinct disc points.

    Satisfies ``Phi_{s, eta_for(a, b)}(lam m_a(lam), lam m_b(lam)) =
    lam m_{s a + (1-s) b}(lam)`` for every ``s in [0, 1]``.  Symmetric in its
    arguments, and conjugating both arguments conjugates the result.
    """
    d = complex(a) - complex(b)
    if abs(d) <= 1e-14 * max(1.0, abs(a), abs(b)):
        raise EqualAlphas("combining parameter undefined for equal points")
    return -np.conj(d) / d


@dataclass(frozen=True)
class Leaf:
    var: int


@dataclass(frozen=True)
class Node:
    s: float
    eta: complex
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Node]


def _tree_vars(node: TreeNode) -> list[int]:
    if isinstance(node, Leaf):
        return [node.var]
    return _tree_vars(node.left) + _tree_vars(node.right)


def _tree_eval(node: TreeNode, w):
    if isinstance(node, Leaf):
        return w[node.var]
    return magic_eval(
        node.s, node.eta, _tree_eval(node.left, w), _tree_eval(node.right, w)
    )


def _tree_scaled(node: TreeNode, c: complex) -> TreeNode:
    # c * Phi_{s,eta}(u, v) == Phi_{s, eta * conj(c)}(c u, c v) for |c| = 1
    if isinstance(node, Leaf):
        return node
    return Node(
        node.s,
        node.eta * np.conj(c),
        _tree_scaled(node.left, c),
        _tree_scaled(node.right, c),
    )


def _tree_to_dict(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"var": node.var}
    return {
        "s": node.s,
        "eta_re": node.eta.real,
        "eta_im": node.eta.imag,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(data: dict) -> TreeNode:
    if "var" in data:
        return Leaf(int(data["var"]))
    return Node(
        float(data["s"]),
        complex(data["eta_re"], data["eta_im"]),
        _tree_from_dict(data["left"]),
        _tree_from_dict(data["right"]),
    )


@dataclass(frozen=True)
class RationalInnerFunction:
    """Composition tree of two-variable blocks over rotated coordinates.

    Evaluation applies the variable permutation, then the conjugate of each
    pre-rotation to the corresponding coordinate, then the tree.  Each
    variable index appears at most once among the leaves, ``F(0) = 0``, and
    ``|F| < 1`` on the open polydisc.
    """

    tree: TreeNode
    pre_rotations: np.ndarray
    permutation: tuple

    def __post_init__(self):
        rot = np.asarray(self.pre_rotations, dtype=complex).ravel()
        if np.any(np.abs(np.abs(rot) - 1.0) > 1e-9):
            raise ValueError("pre-rotations must be unimodular")
        rot.setflags(write=False)
        object.__setattr__(self, "pre_rotations", rot)
        perm = tuple(int(k) for k in self.permutation)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("permutation must be a permutation of 0..n-1")
        object.__setattr__(self, "permutation", perm)
        leaves = _tree_vars(self.tree)
        if len(set(leaves)) != len(leaves):
            raise ValueError("a variable index appears twice among the leaves")
        if leaves and max(leaves) >= len(rot):
            raise ValueError("leaf variable index exceeds rotation vector length")

    @property
    def n(self) -> int:
        return len(self.pre_rotations)

    @property
    def variables(self) -> tuple:
        return tuple(sorted(_tree_vars(self.tree)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] < self.n:
            raise DimensionMismatch(
                f"point has {z.shape[-1]} coordinates, function expects {self.n}"
            )
        w = z[..., list(self.permutation)] * np.conj(self.pre_rotations)
        out = _tree_eval(self.tree, np.moveaxis(w, -1, 0))
        if z.ndim == 1:
            return complex(out)
        return out

    def scaled(self, c: complex) -> "RationalInnerFunction":
        """Fold an outer unimodular factor into the tree: returns ``c * F``."""
        c = unimodular(c)
        return RationalInnerFunction(
            _tree_scaled(self.tree, c),
            self.pre_rotations * np.conj(c),
            self.permutation,
        )

    def to_dict(self) -> dict:
        return {
            "tree": _tree_to_dict(self.tree),
            "pre_rotations": [[r.real, r.imag] for r in self.pre_rotations],
            "permutation": list(self.permutation),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RationalInnerFunction":
        return cls(
            _tree_from_dict(data["tree"]),
            np.array([complex(re, im) for re, im in data["pre_rotations"]]),
            tuple(data["permutation"]),
        )


def rif_eval(f: RationalInnerFunction, z):
    """Module-level alias for evaluating a rational inner function."""
    return f(z)


def validate_weights(t, n: int | None = None) -> np.ndarray:
    """Check a weight vector: nonnegative entries summing to one."""
    t = np.asarray(t, dtype=float).ravel()
    if n is not None and len(t) != n:
        raise ValueError(f"weight vector must have length {n}")
    if np.any(t < -_WEIGHT_ATOL):
        raise ValueError("weights must be nonnegative")
    if abs(float(t.sum()) - 1.0) > _WEIGHT_ATOL:
        raise ValueError("weights must sum to one")
    return np.clip(t, 0.0, None)


def _comb_shape(indices: list[int], direction: str):
    if len(indices) == 1:
        return indices[0]
    if direction == "left":
        return (_comb_shape(indices[:-1], "left"), indices[-1])
    return (indices[0], _comb_shape(indices[1:], "right"))


def _build_tree(shape, alpha, t):
    if isinstance(shape, int):
        return Leaf(shape), complex(alpha[shape]), float(t[shape])
    left, right = shape
    tl, bl, ml = _build_tree(left, alpha, t)
    tr, br, mr = _build_tree(right, alpha, t)
    try:
        eta = eta_for(bl, br)
    except EqualAlphas as exc:
        raise DegenerateCombination(
            "an intermediate convex combination coincides with the next point; "
            "permute variables or switch the association order"
        ) from exc
    s = ml / (ml + mr)
    return Node(s, eta, tl, tr), s * bl + (1.0 - s) * br, ml + mr


def build_left_inverse(alpha, omega, t, association="left") -> RationalInnerFunction:
    """Left inverse to the analytic disc with parameters ``(alpha, omega, t)``.

    The returned ``F`` satisfies, identically in ``lam``,

        F(lam m_{a1}(lam), w1 lam m_{a2}(lam), ..., w_{n-1} lam m_{an}(lam))
            = lam m_{t . alpha}(lam).

    Zero-weight variables are dropped from the tree entirely, so dependence
    on exactly ``k`` variables is a structural property.  ``association``
    selects the combining order: ``"left"`` (default), ``"right"``, or a
    nested tuple of variable indices.

    Raises :class:`DegenerateCombination` when an intermediate combination
    collides with the next active parameter.
    """
    alpha = require_in_disc(alpha, "alpha").ravel()
    n = len(alpha)
    t = validate_weights(t, n)
    omega = np.asarray(omega, dtype=complex).ravel()
    if len(omega) != n - 1:
        raise ValueError("omega must have length n - 1")
    if np.any(np.abs(np.abs(omega) - 1.0) > 1e-9):
        raise ValueError("omega entries must be unimodular")

    active = [i for i in range(n) if t[i] > 0.0]
    if association in ("left", "right"):
        shape = _comb_shape(active, association)
    else:
        shape = association
        used = sorted(_tree_vars_of_shape(shape))
        if used != active:
            raise ValueError("association shape must use each active index once")
    tree, _, _ = _build_tree(shape, alpha, t)
    rotations = np.concatenate(([1.0 + 0.0j], omega))
    return RationalInnerFunction(tree, rotations, tuple(range(n)))


def _tree_vars_of_shape(shape) -> list[int]:
    if isinstance(shape, int):
        return [shape]
    return _tree_vars_of_shape(shape[0]) + _tree_vars_of_shape(shape[1])


def embed_variables(f: RationalInnerFunction, mapping: dict, n: int) -> RationalInnerFunction:
    """Re-index the leaf variables of ``f`` into an ``n``-dimensional space.

    ``mapping`` sends each current leaf index to its new coordinate; the
    rotation of each mapped coordinate is carried over and unmapped
    coordinates get rotation one.
    """

    def remap(node: TreeNode) -> TreeNode:
        if isinstance(node, Leaf):
            return Leaf(mapping[node.var])
        return Node(node.s, node.eta, remap(node.left), remap(node.right))

    rotations = np.ones(n, dtype=complex)
    for old, new in mapping.items():
        rotations[new] = f.pre_rotations[old]
    return RationalInnerFunction(remap(f.tree), rotations, tuple(range(n)))


def bidisc_coefficients(f: RationalInnerFunction):
    """Coefficients of a one-node function as a bilinear rational form.

    Returns ``(num, den)`` with ``F = num / den`` and coefficient order
    ``(1, z1, z2, z1 z2)``; the denominator is normalized to constant term 1.
    """
    if not isinstance(f.tree, Node) or not (
        isinstance(f.tree.left, Leaf) and isinstance(f.tree.right, Leaf)
    ):
        raise ValueError("function is not a single two-variable block")
    if f.permutation != tuple(range(f.n)):
        raise ValueError("coefficient extraction assumes the identity permutation")
    s, eta = f.tree.s, f.tree.eta
    c = np.conj(f.pre_rotations)
    lv, rv = f.tree.left.var, f.tree.right.var
    num = np.zeros(4, dtype=complex)
    den = np.zeros(4, dtype=complex)
    num[1 + lv] = s * c[lv]
    num[1 + rv] = (1.0 - s) * c[rv]
    num[3] = -eta * c[lv] * c[rv]
    den[0] = 1.0
    den[1 + lv] = -(1.0 - s) * eta * c[lv]
    den[1 + rv] = -s * eta * c[rv]
    return num, den


def caratheodory_reduce(alpha, t):
    """Express ``t . alpha`` as a convex combination of three of the points.

    Returns ``(indices, weights)`` with three indices into ``alpha`` and a
    weight vector in the closed 2-simplex reproducing the dot product exactly
    (to ``1e-12``).  Exists by Caratheodory's theorem in the plane; fewer than
    three active points are padded with zero weights.
    """
    alpha = np.asarray(alpha, dtype=complex).ravel()
    n = len(alpha)
    if n < 3:
        raise ValueError("reduction needs at least three variables")
    t = validate_weights(t, n)
    gamma = complex(np.dot(t, alpha))

    weights = t.astype(float).copy()
    active = [i for i in range(n) if weights[i] > 0.0]

    while len(active) > 3:
        quad = active[:4]
        # affine dependence: sum c_k = 0 and sum c_k alpha_k = 0
        rows = np.array(
            [
                [1.0, 1.0, 1.0, 1.0],
                [alpha[i].real for i in quad],
                [alpha[i].imag for i in quad],
            ]
        )
        _, _, vt = np.linalg.svd(rows)
        c = vt[-1]
        if np.max(c) <= 0.0:
            c = -c
        ratios = [
            (weights[i] / c[k], i, k) for k, i in enumerate(quad) if c[k] > 1e-15
        ]
        theta, drop_i, drop_k = min(ratios)
        for k, i in enumerate(quad):
            weights[i] -= theta * c[k]
        weights[drop_i] = 0.0
        weights = np.clip(weights, 0.0, None)
        active = [i for i in active if weights[i] > 0.0]

    indices = list(active)
    for i in range(n):
        if len(indices) == 3:
            break
        if i not in indices:
            indices.append(i)
    indices = sorted(indices)

    w3 = np.array([weights[i] for i in indices])
    if len(active) == 3 and indices == active and np.allclose(w3, t[indices]) and n == 3:
        return tuple(indices), t.copy()

    # polish: exact barycentric solve on the chosen triple
    pts = alpha[indices]
    system = np.array(
        [[1.0, 1.0, 1.0], [p.real for p in pts], [p.imag for p in pts]]
    )
    rhs = np.array([1.0, gamma.real, gamma.imag])
    try:
        solved = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError:
        solved = np.linalg.lstsq(system, rhs, rcond=None)[0]
    if np.all(solved >= -1e-9) and abs(np.dot(solved, pts) - gamma) <= 1e-12:
        w3 = np.clip(solved, 0.0, None)
        w3 = w3 / w3.sum()
    residual = abs(complex(np.dot(w3, pts)) - gamma)
    if residual > 1e-12:
        raise ArithmeticError(f"reduction residual {residual:.3e} exceeds 1e-12")
    return tuple(indices), w3
