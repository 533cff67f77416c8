"""Cross ratios, Liouville masses of boxes and the disk to half-plane normalization."""

import math

from modlim.models.analytic import CircleQuadruple, HalfPlaneTriple, LiouvilleMass


def cross_ratio(z1: complex, z2: complex, z3: complex, z4: complex) -> complex:
    """(z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))"""
    return (z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3))


def liouville_mass_halfplane(t: HalfPlaneTriple) -> LiouvilleMass:
    """Mass of the box [w1, w2] x [w3, oo]."""
    return LiouvilleMass(value=math.log((t.w3 - t.w1) / (t.w3 - t.w2)))


def liouville_mass_circle(q: CircleQuadruple) -> LiouvilleMass:
    """Mass of the box [a, b] x [c, d] of endpoint pairs on the circle."""
    za, zb, zc, zd = q.points()
    cr = cross_ratio(za, zb, zc, zd)
    return LiouvilleMass(value=math.log(cr.real))


def normalize_to_halfplane(q: CircleQuadruple) -> HalfPlaneTriple:
    """
    Image of (a, b, c) under the Cayley map z -> i(1 + z)/(1 - z) rotated so that
    d goes to oo. On the circle this is phi -> -cot(phi / 2) with phi measured
    counterclockwise from d, which is increasing and keeps the order.
    """
    two_pi = 2.0 * math.pi
    ws = [
        -1.0 / math.tan(((t - q.d) % two_pi) / 2.0) for t in (q.a, q.b, q.c)
    ]
    return HalfPlaneTriple(w1=ws[0], w2=ws[1], w3=ws[2])


def conjugate_triple(t: HalfPlaneTriple) -> HalfPlaneTriple:
    """
    The triple whose family is the conjugate one, joining [w2, w3] to [oo, w1].

    x -> -1/(x - w1) sends w1 to oo, keeps the order of w2 < w3 and moves the
    old point at infinity to 0.
    """
    return HalfPlaneTriple(
        w1=-1.0 / (t.w2 - t.w1), w2=-1.0 / (t.w3 - t.w1), w3=0.0
    )
