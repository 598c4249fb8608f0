import numpy as np
import pytest

from moikit import ParseError, lower_bound_search, upper_bound_search
from moikit import jsonio
from conftest import (
    random_factorization,
    random_kernel,
    random_normal_operator,
    random_spectrum,
    random_symbol,
)


def test_matrix_round_trip(rng):
    m = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    back = jsonio.decode_matrix(jsonio.encode_matrix(m))
    np.testing.assert_array_equal(back, m)


def test_matrix_bad_length():
    with pytest.raises(ParseError):
        jsonio.decode_matrix({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})


def test_spectrum_round_trip(rng):
    s = random_spectrum(rng, 4)
    back = jsonio.decode_spectrum(jsonio.encode_spectrum(s))
    assert back.matches(s)


def test_kernel_round_trip(rng):
    k = random_kernel(rng, random_spectrum(rng, 2), random_spectrum(rng, 3))
    back = jsonio.decode_kernel(jsonio.encode_kernel(k))
    np.testing.assert_array_equal(back.values, k.values)
    assert back.domain.matches(k.domain)


def test_symbol_round_trip(rng):
    phi = random_symbol(rng, [random_spectrum(rng, m) for m in (2, 3, 2)])
    back = jsonio.decode_symbol(jsonio.encode_symbol(phi))
    np.testing.assert_array_equal(back.values, phi.values)
    assert back.order == 3


def test_symbol_order_mismatch_rejected(rng):
    phi = random_symbol(rng, [random_spectrum(rng, 2) for _ in range(2)])
    obj = jsonio.encode_symbol(phi)
    obj["order"] = 3
    with pytest.raises(ParseError):
        jsonio.decode_symbol(obj)


def test_operator_round_trip(rng):
    op = random_normal_operator(rng, [1, 2])
    back = jsonio.decode_operator(jsonio.encode_operator(op))
    np.testing.assert_array_equal(back.matrix, op.matrix)
    back.validate(tol=1e-10)


def test_factorization_round_trip(rng):
    f = random_factorization(rng, (2, 3, 2), (2, 2))
    back = jsonio.decode_factorization(jsonio.encode_factorization(f))
    np.testing.assert_array_equal(back.a_first, f.a_first)
    np.testing.assert_array_equal(back.a_mid[0], f.a_mid[0])
    np.testing.assert_array_equal(back.a_last, f.a_last)
    assert back.hilbert_dims == f.hilbert_dims


def test_estimate_encoding_carries_certificates(rng):
    from moikit import WeightedSpectrum

    spectra = tuple(
        WeightedSpectrum(np.arange(3, dtype=float), np.ones(3)) for _ in range(2)
    )
    phi = random_symbol(rng, spectra)
    upper = upper_bound_search(phi, seed=0, restarts=1)
    lower = lower_bound_search(phi, seed=0, restarts=1)
    up = jsonio.encode_estimate(upper)
    assert up["kind"] == "upper"
    assert "a_first" in up["certificate"]
    low = jsonio.encode_estimate(lower)
    assert isinstance(low["certificate"]["witness"], list)


def test_dumps_is_deterministic(rng):
    f = random_factorization(rng, (2, 2), (2,))
    obj = jsonio.encode_factorization(f)
    assert jsonio.dumps(obj) == jsonio.dumps(obj)


def test_load_path_missing_file(tmp_path):
    with pytest.raises(ParseError):
        jsonio.load_path(tmp_path / "nope.json")


def test_load_path_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        jsonio.load_path(p)
