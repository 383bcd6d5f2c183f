import math

import numpy as np
import pytest

import cleandec


def test_clean_decompose_bound():
    rng = np.random.default_rng(0)
    t = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    cert = cleandec.clean_decompose(t)
    assert cert.mode == "clean"
    p = cert.p
    assert np.linalg.norm(p @ p - p, 2) < 1e-8
    inv = 1.0 / np.linalg.svd(t - p, compute_uv=False)[-1]
    assert inv == pytest.approx(cert.inverse_norm, rel=1e-8)
    assert inv <= 4.0 * (1 + 1e-6)
    assert cleandec.verify_certificate(t, cert)["passed"]


@pytest.mark.parametrize("mode", ["clean", "strong", "star", "almost-star"])
def test_modes_verify(mode):
    t = np.array([[0, 1], [0, 0]], dtype=complex)
    cert = cleandec.decompose(t, mode)
    report = cleandec.verify_certificate(t, cert)
    assert report["passed"], report["checks"]


def test_certificate_json_round_trip():
    cert = cleandec.clean_decompose(np.eye(3))
    back = cleandec.Certificate.from_json(cert.to_json())
    assert np.array_equal(back.p, cert.p)
    assert back.inverse_norm == cert.inverse_norm


def test_block_example_norms():
    e = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    f = np.array([[0.5, -0.5j], [0.5j, 0.5]], dtype=complex)
    d = cleandec.difference_invertibility(e, f)
    assert d["invertible_on_join"]
    assert d["ef_norm"] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert d["norm_of_inverse"] == pytest.approx(math.sqrt(2), abs=1e-12)
    form = cleandec.halmos_form(e, f)
    assert form.d3 == 1
    assert form.h[0] == pytest.approx(0.5)


def test_riesz_and_constants():
    a = np.array([[0, 1], [0, 2]], dtype=complex)
    res = cleandec.riesz_projection(a, 0.5)
    assert np.allclose(res["p"], [[1, -0.5], [0, 0]])
    quad = cleandec.riesz_projection(a, 0.5, method="quadrature")
    assert np.allclose(quad["p"], res["p"], atol=1e-10)
    c = cleandec.paper_constants(1.0, 2)
    assert math.exp(c["log_c1"]) == pytest.approx(102)
    assert math.exp(c["log_c2"]) == pytest.approx(1668)


def test_witnesses():
    rows = cleandec.shift_inverse_lowerbound_table(16)
    assert len(rows) == 16
    assert all(r[3] for r in rows)
    assert cleandec.strong_star_clean_counterexample()["holds"]


def test_corpus_and_text():
    first = cleandec.generate_corpus(seed=5, count=6, max_n=4)
    second = cleandec.generate_corpus(seed=5, count=6, max_n=4)
    assert [f for f, _ in first] == [f for f, _ in second]
    for (_, a), (_, b) in zip(first, second):
        assert np.array_equal(a, b)
        text = cleandec.emit_matrix_text(a)
        assert np.array_equal(cleandec.parse_matrix_text(text), a)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        cleandec.parse_matrix_text("2 2\n1 0\n")
    with pytest.raises(ValueError):
        cleandec.clean_decompose(np.zeros((2, 3), dtype=complex))
    with pytest.raises(ValueError):
        cleandec.riesz_projection(np.eye(2, dtype=complex), 1.0)
