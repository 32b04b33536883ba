"""Smoke test for the codeown_py extension module.

Build the extension first:

    cargo build -p codeown-py --features extension-module

then run `python3 python/smoke.py`. If `codeown_py` is not importable (for
example when it was not installed with maturin), the freshly built shared
library under target/ is loaded directly.
"""

import importlib.util
import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    try:
        import codeown_py

        return codeown_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libcodeown_py.so", "libcodeown_py.dylib", "codeown_py.dll"):
            lib = ROOT / "target" / profile / name
            if lib.exists():
                staged = Path(tempfile.mkdtemp()) / "codeown_py.so"
                shutil.copy(lib, staged)
                spec = importlib.util.spec_from_file_location("codeown_py", staged)
                module = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(module)
                return module
    sys.exit("codeown_py not found; run `cargo build -p codeown-py --features extension-module`")


def close(a, b, tol=1e-6):
    return abs(a - b) <= tol


def main():
    co = load_module()
    print("codeown_py", co.__version__)

    ident = co.resolve_identity("Jane Doe", " Jane@Example.COM ")
    assert ident == "jane@example.com", ident
    assert co.classify_expertise(0.05) == "minor"
    assert co.classify_expertise(0.0501) == "major"

    rho, magnitude = co.spearman_rho([1, 2, 3, 4], [2, 4, 6, 8])
    assert close(rho, 1.0) and magnitude == "strong"
    assert co.wilcoxon_one_sided([4, 5, 6], [1, 2, 3]) == 0.05
    delta, effect = co.cliffs_delta([4, 5, 6], [1, 2, 3])
    assert delta == 1.0 and effect == "large"
    ranks = co.npsk_rank({"a": [10, 11, 12], "b": [1, 2, 3], "c": [1, 2, 3]})
    assert ranks == {"a": 1, "b": 2, "c": 2}, ranks

    with tempfile.TemporaryDirectory() as tmp:
        repo = Path(tmp) / "repo"
        co.build_fixture("scenario1", str(repo))
        snap = co.ReleaseSnapshot.mine(str(repo), "r1", release_name="r1")
        assert snap.release_name == "r1"
        assert snap.files() == ["A.java"]

        profile = snap.profile("A.java")
        by_key = {d.key: d for d in profile.developers()}
        chris, pat = by_key["chris@example.com"], by_key["pat@example.com"]
        assert close(chris.own_commit, 0.25) and close(pat.own_commit, 0.75)
        assert close(chris.own_line, 84 / 90) and close(pat.own_line, 6 / 90)
        assert close(profile.metrics()["OWN_COMMIT"], 0.75)
        assert profile.overlap() == (1.0, 0.0, 0.0)

        again = co.ReleaseSnapshot.from_json(snap.to_json())
        assert again.to_json() == snap.to_json()

        summary = json.loads(snap.divergence_summary_json())
        assert summary["n_files"] == 1
        header = snap.features_csv().splitlines()[0]
        assert header.startswith("release_name,path,OWN_COMMIT,OWN_LINE"), header

        co.build_fixture("scenario3", str(Path(tmp) / "s3"))
        snap3 = co.ReleaseSnapshot.mine(str(Path(tmp) / "s3"), "r2", "r1")
        common, commit_only, line_only = snap3.profile("C.java").overlap()
        assert (common, commit_only, line_only) == (0.5, 0.0, 0.5)
        assert snap3.profile("C.java").correlation() is None

    try:
        co.ReleaseSnapshot.mine("/nonexistent/repo", "r1")
    except co.CodeownError:
        pass
    else:
        raise AssertionError("mining a missing repository should raise")

    print("smoke test passed")


if __name__ == "__main__":
    main()
