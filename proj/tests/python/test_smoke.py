import json
import math

import pytest

import torusfactor as tf

GOLDEN = 0.6180339887
SILVER = 0.4142135624


def test_version():
    assert tf.__version__ == "0.3.1"


def test_rigid_rotation_number():
    est, bound = tf.rotation_number(tf.CircleLift.rigid(0.25), 0.0, 1000)
    assert est == pytest.approx(0.25, abs=1e-12)
    assert bound > 0


def test_denjoy_rotation_number():
    g = tf.CircleLift.from_json(json.dumps({"kind": "denjoy", "alpha": GOLDEN}))
    est, _ = tf.rotation_number(g, 0.0, 100000)
    assert abs(est - GOLDEN) <= 1.1e-5


def test_map_from_json_and_inverse():
    f = tf.TorusMap.from_json(json.dumps({"kind": "gallery", "id": "3.2"}))
    for z in [(0.1, 0.2), (0.7, 0.4), (0.33, 0.91)]:
        w = f.inverse(f(z))
        assert math.hypot(w[0] - z[0], w[1] - z[1]) < 1e-9


def test_rotation_target():
    text = json.dumps({"kind": "rigid", "alpha": 0.1, "beta": 0.2})
    assert tf.rotation_target(text) == pytest.approx((0.1, 0.2))
    assert tf.rotation_target(json.dumps({"kind": "dehn", "k": 1})) is None


def test_bad_map_raises():
    with pytest.raises(ValueError):
        tf.TorusMap.from_json(json.dumps({"kind": "nonsense"}))


def test_rigid_deviations_vanish():
    f = tf.TorusMap.rigid(GOLDEN, SILVER)
    p = tf.deviation_profile(f, (0.0, 1.0), SILVER, n_max=200, samples=32)
    assert p["c_est"] < 1e-9
    assert p["bounded"]


def test_skew_product_commutes():
    f = tf.TorusMap.rigid(GOLDEN, SILVER)
    F = tf.CentralizedSkew(f, SILVER)
    s = tf.SkewState(0.2, 0.3, 0.1)
    back = F.apply_inverse(F.apply(s))
    assert tf.skew_distance(back, s) < 1e-12
    assert tf.check_commutation(F, 200) <= 1e-9


def test_no_gap_counterexample():
    r = tf.no_gap_exhaustive([-5, -4], 1)
    assert r["counterexamples"] > 0
    xi = r["first"]["xi"]
    assert tf.no_gap_witness(1, 0, xi) is None


def test_surgery_diameters_are_two_delta():
    d = tf.surgery_diameters((GOLDEN, SILVER), 0.5, 0.01, 50)
    assert len(d) == 101
    assert all(x == pytest.approx(0.02) for x in d)


def test_manifest_hash_is_stable():
    h = tf.gallery_manifest_hash()
    assert len(h) == 16
    assert h == tf.gallery_manifest_hash()
    assert json.loads(tf.gallery_manifest_json())
