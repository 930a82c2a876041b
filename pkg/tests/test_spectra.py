import math

import numpy as np
import pytest

from kount.complexes import generate_closure, standard_complex
from kount.errors import DomainError, InputError, SizeLimitError
from kount.exact import char_poly
from kount.matrices import IntegerMatrix, connection_matrix, counting_matrix, supercharge
from kount.spectra import (Spectrum, charpoly_backward_error, charpoly_residual, counting_spectrum,
                           density_of_states, eigenvalues_sym,
                           functional_equation_residual, spectral_symmetry_residual,
                           supercharge_nullity, supercharge_spectrum, unit_eigenvalue_multiplicity,
                           zeta, zeta_grid)

from conftest import (cycle4, octahedron_cell, seventy, star3, suite_complex,
                      suspended_octahedron, triangle)

R2, R3, R5 = math.sqrt(2), math.sqrt(3), math.sqrt(5)
POINT = generate_closure([[1]])


def test_star3_spectrum():
    ref = sorted([3 + 2 * R2, 3 - 2 * R2] + [(3 + R5) / 2] * 2 + [(3 - R5) / 2] * 2 + [1])
    assert np.allclose(counting_spectrum(star3()).eigenvalues, ref, atol=1e-9)
    assert np.allclose(eigenvalues_sym(counting_matrix(star3())).eigenvalues, ref, atol=1e-9)


def test_triangle_spectrum():
    ref = sorted([6 + math.sqrt(35), 6 - math.sqrt(35)] + [(3 + R5) / 2] * 2 + [(3 - R5) / 2] * 2 + [1])
    assert np.allclose(counting_spectrum(triangle()).eigenvalues, ref, atol=1e-9)


def test_c4_spectrum():
    ref = sorted([3 + 2 * R2, 3 - 2 * R2, 2 + R3, 2 + R3, 2 - R3, 2 - R3, 1, 1])
    assert np.allclose(counting_spectrum(cycle4()).eigenvalues, ref, atol=1e-9)


def test_trivial_spectra():
    assert eigenvalues_sym(IntegerMatrix([[1]])).eigenvalues.tolist() == [1.0]
    assert spectral_symmetry_residual(POINT) == 0
    assert unit_eigenvalue_multiplicity(POINT) == 1


def test_octahedron_cell_spectrum():
    spec = counting_spectrum(octahedron_cell())
    assert abs(spec.eigenvalues[0] - 0.0200446) < 1e-4
    assert abs(spec.eigenvalues[-1] - 49.8889) < 1e-4
    assert unit_eigenvalue_multiplicity(spec) == 7
    assert spectral_symmetry_residual(spec) < 1e-7


def test_octahedron_cell_supercharge():
    q = supercharge_spectrum(octahedron_cell()).eigenvalues
    assert np.allclose(q, -q[::-1], atol=1e-9)
    for value, mult in ((8 * R3, 3), (2 * R3, 5)):
        for sign in (1, -1):
            assert np.sum(np.abs(q - sign * value) < 1e-6) == mult
    for sign in (1, -1):
        for pm in (1, -1):
            v = 2 * math.sqrt(7 * (45 + pm * 8 * math.sqrt(30)))
            assert np.sum(np.abs(q - sign * v) < 1e-6) == 1
    assert np.sum(np.abs(q) < 1e-9) == 7
    assert supercharge_nullity(octahedron_cell()) == 7


def test_unit_multiplicity_c4():
    assert unit_eigenvalue_multiplicity(cycle4()) == 2


def test_nullity_matches_unit_multiplicity():
    for seed in range(15):
        G = suite_complex(seed)
        if G.n > 70:
            continue
        assert supercharge_nullity(G) == unit_eigenvalue_multiplicity(G)


def test_seventy_set_complex():
    spec = counting_spectrum(seventy())
    assert spec.n == 70
    assert abs(spec.eigenvalues[0] - 0.00868721) < 1e-3
    assert abs(spec.eigenvalues[-1] - 115.112) < 1e-3
    assert np.sum(eigenvalues_sym(connection_matrix(seventy())).eigenvalues > 0) == 35


def test_product_of_eigenvalues_is_one():
    for seed in range(20):
        spec = counting_spectrum(suite_complex(seed))
        assert abs(spec.product() - 1) < 1e-6


def test_float_roots_of_exact_charpoly():
    for seed in range(40):
        G = suite_complex(seed)
        if G.n > 40:
            continue
        assert charpoly_backward_error(char_poly(counting_matrix(G)), counting_spectrum(G)) < 1e-15
    for G in (star3(), triangle(), cycle4()):
        assert charpoly_residual(char_poly(counting_matrix(G)), counting_spectrum(G)) < 1e-6


def test_root_residual_grows_with_derivative():
    # |p(lambda)| / ||p|| ~ |p'(lambda)| / ||p|| * delta: large for wide spectra
    G = seventy()
    p = char_poly(counting_matrix(G))
    spec = counting_spectrum(G)
    assert charpoly_backward_error(p, spec) < 1e-15
    assert charpoly_residual(p, spec) > 1e-6


def test_zeta_identities():
    spec = counting_spectrum(star3())
    assert zeta(spec, 0) == pytest.approx(7)
    assert zeta(spec, 1) == pytest.approx(13, abs=1e-9)
    assert zeta(spec, -1) == pytest.approx(13, abs=1e-9)
    spec = counting_spectrum(octahedron_cell())
    K = counting_matrix(octahedron_cell())
    assert abs(zeta(spec, -1) - K.trace()) < 1e-9
    assert abs(zeta(spec, 1) - 27 * 0 - sum(v for v in np.diag(np.array(K.tolist())))) < 1e-7


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta(Spectrum(np.array([-1.0, 2.0])), 1)


def test_functional_equation():
    assert functional_equation_residual(counting_spectrum(star3()), 100, 0) < 1e-8
    assert functional_equation_residual(counting_spectrum(POINT), 100, 0) == 0
    for seed in range(10):
        G = suite_complex(seed)
        assert functional_equation_residual(counting_spectrum(G), 50, seed) < 1e-6 * G.n


def test_literal_mirror_is_conjugate_not_equal():
    # zeta(-a+ib) is the conjugate of zeta(a+ib); the moduli agree, the values do not
    spec = counting_spectrum(star3())
    s = complex(1.5, 2.0)
    left, right = zeta(spec, s), zeta(spec, complex(-s.real, s.imag))
    assert abs(left - right.conjugate()) < 1e-12
    assert abs(left - right) > 1e-3


def test_zeta_grid_point_and_symmetry():
    g = zeta_grid(counting_spectrum(POINT), step=0.5)
    assert np.allclose(g.abs, 1)
    g = zeta_grid(counting_spectrum(star3()))
    assert g.values.shape == (161, 601)
    assert g.mirror_residual() < 1e-8
    assert g.region == (-4.0, 4.0, 0.0, 30.0)


def test_zeta_grid_csv_format():
    g = zeta_grid(counting_spectrum(star3()), -1, 1, 0, 1, 0.5)
    lines = g.to_csv().splitlines()
    assert lines[0] == "re,im,abs,arg"
    assert len(lines) == 1 + 5 * 3
    assert lines[1].startswith("-1.0,0.0,")


def test_zeta_grid_bad_step():
    with pytest.raises(InputError):
        zeta_grid(counting_spectrum(star3()), step=0)


def test_density_of_states():
    edges, mass = density_of_states(counting_spectrum(POINT), 1)
    assert mass.tolist() == [1.0]
    edges, mass = density_of_states(counting_spectrum(standard_complex("cycle", 40)), 12, "log")
    assert mass.sum() == pytest.approx(1)
    assert np.allclose(mass, mass[::-1])
    with pytest.raises(InputError):
        density_of_states(counting_spectrum(POINT), 0)


def test_barycentric_densities_emitted():
    from kount.complexes import barycentric_refinement
    G = cycle4()
    for _ in range(2):
        G = barycentric_refinement(G)
        edges, mass = density_of_states(counting_spectrum(G), 8, "log")
        assert mass.sum() == pytest.approx(1)


def test_suspended_octahedron_grid_symmetric():
    g = zeta_grid(counting_spectrum(suspended_octahedron()), step=0.25)
    assert g.mirror_residual() < 1e-6


def test_size_guard():
    with pytest.raises(SizeLimitError):
        eigenvalues_sym(np.eye(2001))


def test_spectrum_json():
    spec = counting_spectrum(star3())
    d = spec.to_json_dict()
    assert set(d) == {"eigenvalues", "tol"}
    assert Spectrum.from_json_dict(d).eigenvalues.tolist() == spec.eigenvalues.tolist()


def test_supercharge_spectrum_symmetric_random():
    for seed in range(10):
        q = eigenvalues_sym(supercharge(suite_complex(seed))).eigenvalues
        assert np.allclose(q, -q[::-1], atol=1e-7 * max(1, np.abs(q).max()))
