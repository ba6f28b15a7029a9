import math
from pathlib import Path

import numpy as np
import pytest

import appdo

DATA = Path(__file__).resolve().parents[2] / "data" / "symbols"


def load(name):
    return appdo.Symbol.load(str(DATA / name))


def test_identity_kernel():
    K, labels = appdo.kernel(load("identity.toml"), 0.0, "4")
    assert K.shape == (9, 9)
    assert labels[0] == "(-4)"
    assert np.array_equal(K, np.eye(9))


def test_round_trip():
    text = (DATA / "weyl.toml").read_text()
    a = appdo.Symbol.parse(text)
    assert a.serialize() == text
    assert appdo.Symbol.parse(a.serialize()) == a
    assert a.frequencies() == ["(-1)", "(0)", "(1)"]


def test_rho_rejected():
    text = (DATA / "bad_rho.toml").read_text()
    with pytest.raises(appdo.InputError, match="rho"):
        appdo.Symbol.parse(text)


def test_adjoint_and_composition():
    a = load("regression_cos.toml")
    assert a.adjoint().adjoint() == a
    K, _ = appdo.kernel(a, 0.3, "3")
    Kd, _ = appdo.kernel(a.adjoint(), 0.3, "3")
    assert np.max(np.abs(Kd - K.conj().T)) <= 1e-12
    b = a.adjoint().compose(a)
    assert appdo.positivity(b, 0.0, "3")["psd"]


def test_apply_multiplier():
    g = load("multiplier_g.toml")
    out = appdo.apply(g, {"(1)": 1.0})
    assert out.keys() == {"(1)"}
    assert abs(out["(1)"] - 0.5) <= 1e-15


def test_weyl_residual():
    s, r = appdo.weyl_residual(load("weyl.toml"), 0.0, [0.1, 0.0])
    b = math.sqrt(1.01)
    assert abs(s - 1) <= 1e-15
    assert abs(r[0] - math.sqrt((1 / b - 1) ** 2 + 0.01 / b**6 / 2)) <= 1e-12
    assert r[1] == 0.0


def test_domain_error():
    with pytest.raises(appdo.DomainError):
        appdo.weyl_residual(load("weyl.toml"), 0.5, [0.1])


def test_equivalence_and_verify():
    assert appdo.equivalence_residual(load("regression_cos.toml"), "(1,0)", 1) <= 1e-6
    ok, text = appdo.verify("symbols", 3)
    assert ok
    assert text.startswith("# appdo verify suite=symbols seed=3")


def test_spectra():
    vals = appdo.multiplier_spectrum(load("multiplier_g.toml"), [-1.0, 0.0, 1.0])
    kinds = {k for _, k in vals}
    assert "point" in kinds and "continuous-witness" in kinds
    ev = appdo.finite_section_spectrum(load("identity.toml"), 0.0, "2")
    assert np.allclose(ev, 1.0)
    assert appdo.resolvent(load("identity.toml"), 0.0, 0.0, "2")["inv_norm"] == pytest.approx(1.0)
