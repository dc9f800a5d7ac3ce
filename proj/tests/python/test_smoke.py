import math

import pytest

import henlab


def test_special_parameters():
    sp = henlab.special_parameters()
    assert -1.56 <= sp["a1"] <= -1.52
    assert -1.90 <= sp["a2"] <= -1.88


def test_word_roundtrip():
    assert henlab.normalize_word("c1") == henlab.normalize_word(henlab.normalize_word("c1"))
    with pytest.raises(ValueError):
        henlab.normalize_word("q7")


def test_step_and_lyapunov():
    x, y = henlab.step(-1.4, 0.3, 0.0, 0.0)
    assert x == pytest.approx(-1.4) and y == pytest.approx(0.0)
    assert henlab.lyapunov(0.0, 0.1) == pytest.approx(-1.15129, abs=1e-3)
    assert henlab.lyapunov(1.0, 0.01) is None


def test_renormalize_c1():
    lo, mid, hi = henlab.renorm_window("c1", b=1e-3)
    assert lo < mid < hi
    r = henlab.renormalize(0.5 * (lo + hi), 1e-3, "c1", grid=0)
    assert r["bbar"] == pytest.approx(1e-3, abs=1e-12)
    assert -2.0 < r["abar"] < 0.25


def test_sweep_shape_and_tags():
    img = henlab.sweep("swallow-escape", (-2.2, 0.6), (-2.2, 0.6), 24, 20, workers=2)
    assert img.shape == (20, 24)
    assert set(img.ravel().tolist()) <= {0.0, 1.0, 2.0}


def test_cli_entry():
    code, out, _ = henlab.cli(["special-params"])
    assert code == 0 and "a2" in out
    code, _, err = henlab.cli(["no-such-command"])
    assert code == 2 and err
