import math
import random
from fractions import Fraction as F

import pytest

from sdtwists.family import (
    PARITY_CUBIC,
    PARITY_EVEN,
    PARITY_ODD,
    WeierstrassModel,
    build_family,
    build_model,
    disc_form,
    specialize,
    twist_polynomial,
    verify_model,
    verify_new_point,
)
from sdtwists.padic import cycle_certificate, n_cycle_type, newton_polygon, valuation
from sdtwists.polyarith import BivarPoly, Poly, discriminant, discriminant_in_t

CURVES = ((0, -2), (-16, 16), (1, 1))


def test_build_model_follows_root_lift_steps():
    # curve y^2 = x^3 - 2: the first admissible prime with a simple root is
    # 5, with root 3; v_5(g(3)) = 2 rejects the raw lift and the shift 8
    # gives (x+8)^3 - 2 = x^3 + 24x^2 + 192x + 510 with 5 || 510, 5 not | 192
    g = Poly([-2, 0, 0, 1])
    assert g(3) % 5 == 0 and g.derivative()(3) % 5 != 0
    assert valuation(g(3), 5) == 2
    assert valuation(g(8), 5) == 1
    shifted = g.compose_linear(1, 8)
    assert shifted == Poly([510, 192, 24, 1])

    model = build_model((0, -2), 0, 0, 1, 3)
    assert model.p2 == 5
    check = verify_model(model)
    assert check.all_ok()


def test_build_model_rejects_singular_curve():
    with pytest.raises(ValueError):
        build_model((0, 0), 0, 0, 1, 3)


def test_verify_model_catches_violations():
    base = build_model((0, -2), 0, 0, 1, 3)
    bad = WeierstrassModel(
        B=base.B, C=base.C, D=F(25), p1=base.p1, p2=5, p3=base.p3,
        shift_target=0, alpha=F(0), epsilon=F(1),
    )
    assert not verify_model(bad).unit_divisibility
    exact = WeierstrassModel(
        B=3 * F(1, 2), C=base.C, D=base.D, p1=base.p1, p2=5, p3=base.p3,
        shift_target=0, alpha=F(1, 2), epsilon=F(1, 1000),
    )
    assert abs(exact.B - 3 * exact.alpha) < exact.epsilon


def test_twist_polynomial_shapes():
    model = build_model((1, 1), -1, -1, F(1, 2), 6)
    f = model.f
    fam3 = twist_polynomial(build_model((1, 1), 0, 0, F(1, 2), 3), 3)
    assert fam3.parity_case == PARITY_CUBIC
    assert fam3.P.degree == 3

    fam6 = twist_polynomial(model, 6)
    assert fam6.parity_case == PARITY_EVEN
    assert fam6.P.degree == 6
    assert fam6.P.lead == Poly([0, 0, 1])  # t^2

    model7 = build_model((1, 1), 1, 1, F(1, 2), 7)
    fam7 = twist_polynomial(model7, 7)
    assert fam7.parity_case == PARITY_ODD
    assert fam7.P.degree == 7
    assert fam7.P.xcoeffs[0] == -Poly([0, 0, 1])  # -t^2 constant term


def test_twist_polynomial_rejects_small_degree():
    model = build_model((1, 1), 0, 0, F(1, 2), 3)
    with pytest.raises(ValueError):
        twist_polynomial(model, 2)


def test_disc_form_degrees_all_parities():
    for curve in CURVES:
        for d in range(3, 11):
            _, _, form = build_family(curve, d)
            assert form.t_power == (0 if d == 3 else 2 * d - 8)
            assert form.degree_h == (4 if d == 3 else 6)
            assert form.non_squarefull
            assert form.both_signs_on_unit_interval
            assert form.simple_factor is not None
            assert form.simple_factor.coeff(0) != 0  # not t


def test_closed_form_odd_family():
    # x^(d-3) (x+1)^3 - t^2
    for d in (5, 7, 9):
        shifted = Poly([1, 3, 3, 1]).shift(d - 3)
        xc = [Poly([c]) for c in shifted.coeffs]
        xc[0] = xc[0] + Poly([0, 0, -1])
        p = BivarPoly(xc)
        sign = (-1) ** ((d - 1) // 2)
        expected = Poly(
            [0] * (2 * d - 4)
            + [sign * (-27 * (d - 3) ** (d - 3)), 0, sign * d**d]
        )
        assert discriminant_in_t(p) == expected


def test_closed_form_even_family():
    # t^2 x^d - (x-1)^3
    for d in (4, 6, 8):
        xc = [Poly([c]) for c in (1, -3, 3, -1)]
        xc += [Poly()] * (d - 4) + [Poly([0, 0, 1])]
        p = BivarPoly(xc)
        sign = (-1) ** (d // 2)
        expected = Poly(
            [0] * (2 * d - 4)
            + [sign * (-27 * (d - 3) ** (d - 3)), 0, sign * d**d]
        )
        assert discriminant_in_t(p) == expected


def test_even_family_reciprocal_discriminant():
    _, fam, _ = build_family((1, 1), 6)
    rng = random.Random(8)
    for _ in range(10):
        t0 = F(rng.randint(-9, 9), rng.randint(1, 9))
        spec = fam.P.eval_t(t0)
        if spec.degree != 6 or spec.coeff(0) == 0:
            continue
        assert discriminant(spec) == discriminant(spec.reverse())


def test_specialize_consistency_with_form():
    model, fam, form = build_family((0, -2), 3)
    spec = specialize(fam, 1, 1)
    disc_direct = discriminant(spec)
    disc_from_form = form.unit * form.h(F(1))
    # the two differ by the square of the clearing factor
    ratio = disc_direct / disc_from_form
    assert ratio > 0
    root = F(
        math.isqrt(ratio.numerator), math.isqrt(ratio.denominator)
    )
    assert root * root == ratio


def test_specialize_validations():
    _, fam, _ = build_family((1, 1), 4)
    with pytest.raises(ValueError):
        specialize(fam, 2, 0)
    with pytest.raises(ValueError):
        specialize(fam, 2, 4)


def test_specialize_primitive_integral():
    _, fam, _ = build_family((1, 1), 5)
    spec = specialize(fam, 3, 7)
    assert spec.is_integral()
    assert spec.content() == 1
    assert spec.lead > 0


def test_point_identity_random_models_and_points():
    rng = random.Random(15)
    curves = [(a, b) for a in range(-3, 4) for b in range(-3, 4)
              if -4 * a**3 - 27 * b**2 != 0]
    rng.shuffle(curves)
    models = 0
    for curve in curves:
        if models >= 20:
            break
        d = rng.choice((3, 4, 5, 6))
        try:
            _, fam, _ = build_family(curve, d)
        except ValueError:
            continue
        models += 1
        checked = 0
        while checked < 50:
            u = rng.randint(-20, 20)
            v = rng.randint(-20, 20)
            if v == 0 or math.gcd(u, v) != 1:
                continue
            checked += 1
            spec = specialize(fam, u, v)
            if spec.degree < 1:
                continue
            assert verify_new_point(spec, fam, u, v)
    assert models == 20


def test_point_identity_negative_control():
    _, fam, _ = build_family((1, 1), 6)
    spec = specialize(fam, 3, 2)
    assert verify_new_point(spec, fam, 3, 2)
    assert not verify_new_point(spec + Poly([1]), fam, 3, 2)


def test_polygon_cycle_scenarios_at_p2():
    for d in (4, 6, 8):
        model, fam, _ = build_family((1, 1), d)
        p = model.p2
        deep = specialize(fam, 1, p ** (d // 2))
        assert cycle_certificate(newton_polygon(deep, p)) == [n_cycle_type(d, d)]
        shallow = specialize(fam, 1, p)
        assert cycle_certificate(newton_polygon(shallow, p)) == [
            n_cycle_type(d - 1, d)
        ]
    for d in (5, 7, 9):
        model, fam, _ = build_family((1, 1), d)
        p = model.p2
        inv = specialize(fam, 1, p)
        assert cycle_certificate(newton_polygon(inv, p)) == [n_cycle_type(d, d)]
        direct = specialize(fam, p, 1)
        assert cycle_certificate(newton_polygon(direct, p)) == [
            n_cycle_type(d - 2, d)
        ]


def test_forced_cubic_congruence_model():
    model = build_model((-16, 16), 0, 0, F(1, 2), 3, force_cubic_mod=37)
    check = verify_model(model)
    assert check.all_ok()
    assert check.forced_congruence is True
    # the family discriminant then reduces to the bare cubic class mod 37
    fam = twist_polynomial(model, 3)
    for t in (1, 2, 5):
        spec_disc = discriminant(fam.P.eval_t(F(t)))
        target = (-(t**3) * (27 * t + 4)) % 37
        num = spec_disc.numerator % 37
        den = spec_disc.denominator % 37
        assert num * pow(den, -1, 37) % 37 == target
