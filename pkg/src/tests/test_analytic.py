import math

import pytest
from scipy.special import ellipk

from modlim.analytic import (
    ASYMPTOTIC_OFFSET,
    agm,
    asymptotic_defect,
    circle_modulus,
    conjugate_modulus,
    cross_ratio,
    elliptic_k,
    grotzsch_mu,
    liouville_mass_circle,
    liouville_mass_halfplane,
    normalize_to_halfplane,
    quad_modulus,
    quadrilateral_modulus,
)
from modlim.core.errors import DegenerateQuadruple, InvalidQuadruple, OutOfRange
from modlim.models import CircleQuadruple, HalfPlaneTriple

pytestmark = pytest.mark.unit

ROOTS_OF_UNITY = CircleQuadruple(a=math.pi / 2, b=math.pi, c=3 * math.pi / 2, d=0.0)


def triple(w1, w2, w3):
    return HalfPlaneTriple(w1=w1, w2=w2, w3=w3)


def random_triple(fake):
    w1 = fake.pyfloat(min_value=-5, max_value=5)
    g1 = fake.pyfloat(min_value=0.1, max_value=5)
    g2 = fake.pyfloat(min_value=0.1, max_value=5)
    return triple(w1, w1 + g1, w1 + g1 + g2)


class TestElliptic:
    def test_agm_of_equal_arguments(self):
        assert agm(2.0, 2.0) == 2.0

    @pytest.mark.parametrize("k", [0.0, 0.1, 0.5, 0.9, 0.999999])
    def test_elliptic_k_matches_scipy(self, k):
        # scipy takes the parameter m = k^2
        assert elliptic_k(k) == pytest.approx(ellipk(k * k), rel=1e-10)

    def test_elliptic_k_domain(self):
        with pytest.raises(OutOfRange):
            elliptic_k(1.0)


class TestGrotzschMu:
    def test_symmetric_point(self):
        assert grotzsch_mu(1 / math.sqrt(2)) == pytest.approx(math.pi / 2, abs=1e-12)

    @pytest.mark.parametrize("r", [0.2, 0.5, 0.9])
    def test_functional_identity(self, r):
        product = grotzsch_mu(r) * grotzsch_mu(math.sqrt(1 - r * r))
        assert product == pytest.approx(math.pi**2 / 4, abs=1e-10)

    def test_near_log_asymptote(self):
        assert abs(grotzsch_mu(0.1) - math.log(40)) < 0.003

    def test_branches_agree_at_threshold(self):
        r = 1e-8
        exact = grotzsch_mu(r, threshold=0.0)
        assert grotzsch_mu(r * 0.999) == pytest.approx(math.log(4 / (r * 0.999)), rel=0)
        assert exact == pytest.approx(math.log(4 / r), rel=1e-12)

    def test_strictly_decreasing(self):
        rs = [0.01 * i for i in range(1, 100)]
        values = [grotzsch_mu(r) for r in rs]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("r", [0.0, 1.0, -0.5, 2.0])
    def test_out_of_range(self, r):
        with pytest.raises(OutOfRange):
            grotzsch_mu(r)


class TestLiouville:
    @pytest.mark.parametrize(
        "t, expected",
        [
            ((0, 1, 2), math.log(2)),
            ((0, 0.99, 1), math.log(100)),
            ((0, 1, 3), math.log(1.5)),
        ],
    )
    def test_halfplane(self, t, expected):
        assert liouville_mass_halfplane(triple(*t)).value == pytest.approx(expected, rel=1e-12)

    def test_roots_of_unity(self):
        a, b, c, d = ROOTS_OF_UNITY.points()
        assert cross_ratio(a, b, c, d).real == pytest.approx(2.0, abs=1e-14)
        assert liouville_mass_circle(ROOTS_OF_UNITY).value == pytest.approx(math.log(2), abs=1e-12)

    def test_normalization_preserves_mass(self, fake):
        for _ in range(50):
            angles = sorted(fake.pyfloat(min_value=0.0, max_value=2 * math.pi) for _ in range(4))
            gaps = [b - a for a, b in zip(angles, angles[1:])]
            if min(gaps + [2 * math.pi - angles[3] + angles[0]]) < 1e-3:
                continue
            q = CircleQuadruple(a=angles[0], b=angles[1], c=angles[2], d=angles[3])
            t = normalize_to_halfplane(q)
            assert liouville_mass_halfplane(t).value == pytest.approx(
                liouville_mass_circle(q).value, abs=1e-9
            )

    def test_normalized_roots_of_unity(self):
        t = normalize_to_halfplane(ROOTS_OF_UNITY)
        assert (t.w3 - t.w1) / (t.w3 - t.w2) == pytest.approx(2.0, abs=1e-12)

    def test_rotation_invariance(self):
        base = liouville_mass_circle(ROOTS_OF_UNITY).value
        for shift in (0.1, 1.0, 2.5, 5.0):
            q = CircleQuadruple(
                a=ROOTS_OF_UNITY.a + shift,
                b=ROOTS_OF_UNITY.b + shift,
                c=ROOTS_OF_UNITY.c + shift,
                d=ROOTS_OF_UNITY.d + shift,
            )
            assert liouville_mass_circle(q).value == pytest.approx(base, abs=1e-12)
            assert circle_modulus(q) == pytest.approx(1.0, abs=1e-10)

    def test_coincident_points(self):
        with pytest.raises(DegenerateQuadruple):
            CircleQuadruple(a=0.0, b=1.0, c=1.0, d=2.0)

    def test_clockwise_points(self):
        with pytest.raises(InvalidQuadruple):
            CircleQuadruple(a=0.0, b=2.0, c=1.0, d=3.0)


class TestQuadModulus:
    def test_symmetric_anchor(self):
        assert quad_modulus(triple(0, 1, 2)) == pytest.approx(1.0, abs=1e-10)

    def test_via_mu(self):
        expected = (2 / math.pi) * grotzsch_mu(0.1)
        assert quad_modulus(triple(0, 0.99, 1)) == pytest.approx(expected, rel=1e-12)

    def test_affine_invariance(self, fake):
        for _ in range(100):
            t = random_triple(fake)
            alpha = fake.pyfloat(min_value=0.5, max_value=2)
            beta = fake.pyfloat(min_value=-2, max_value=2)
            moved = triple(alpha * t.w1 + beta, alpha * t.w2 + beta, alpha * t.w3 + beta)
            assert quad_modulus(moved) == pytest.approx(quad_modulus(t), rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize(
        "scale, det",
        [(0.0, 1.0), (1.0, 0.3), (-3.0, 5.0), (10.0, 0.01)],
    )
    def test_mobius_invariance(self, fake, scale, det):
        # x -> scale + det / (pole - x) preserves the half-plane and, for a pole
        # left of w1, the order of w1 < w2 < w3 < oo; oo lands on `scale`
        for _ in range(50):
            t = random_triple(fake)
            pole = t.w1 - fake.pyfloat(min_value=0.05, max_value=5)

            def move(x):
                return scale + det / (pole - x)

            ws = [move(t.w1), move(t.w2), move(t.w3), scale]
            assert ws == sorted(ws)
            assert quadrilateral_modulus(*ws) == pytest.approx(quad_modulus(t), rel=1e-9)
            mass = math.log(cross_ratio(*ws).real)
            assert mass == pytest.approx(liouville_mass_halfplane(t).value, rel=1e-9, abs=1e-12)

    def test_increases_as_gap_closes(self):
        values = [quad_modulus(triple(0, w2, 1)) for w2 in (0.1, 0.5, 0.9, 0.99, 0.999)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_conjugate_product_is_one(self, fake):
        for _ in range(50):
            t = random_triple(fake)
            assert quad_modulus(t) * conjugate_modulus(t) == pytest.approx(1.0, abs=1e-10)

    def test_quadrilateral_with_far_point(self):
        far = quadrilateral_modulus(0.0, 1.0, 2.0, 1e9)
        assert far == pytest.approx(quad_modulus(triple(0, 1, 2)), abs=1e-8)

    def test_quadrilateral_order(self):
        with pytest.raises(DegenerateQuadruple):
            quadrilateral_modulus(0.0, 2.0, 1.0, 3.0)

    def test_triple_order(self):
        with pytest.raises(DegenerateQuadruple):
            triple(0, 2, 1)


class TestAsymptotics:
    @pytest.mark.parametrize(
        "w2, bound", [(0.99, 0.01), (0.999, 0.001), (0.9999, 0.0001)]
    )
    def test_defect_bounds(self, w2, bound):
        assert abs(asymptotic_defect(triple(0, w2, 1))) < bound

    def test_deep_regime(self):
        assert abs(asymptotic_defect(triple(0, 1 - 1e-6, 1))) < 1e-6

    def test_defect_shrinks(self):
        defects = [
            abs(asymptotic_defect(triple(0, 1 - 10.0**-k, 1))) for k in range(1, 7)
        ]
        assert all(b < a for a, b in zip(defects, defects[1:]))

    def test_defect_matches_definition(self):
        t = triple(0, 0.9, 1)
        expected = (
            quad_modulus(t) - liouville_mass_halfplane(t).value / math.pi - ASYMPTOTIC_OFFSET
        )
        assert asymptotic_defect(t) == expected
