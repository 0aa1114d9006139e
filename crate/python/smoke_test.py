#!/usr/bin/env python3
"""Builds the grpd extension module in release mode and drives every
binding once, asserting against known-exact values."""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]

ENTRANCE = json.dumps({
    "vertices": ["v1", "v2"],
    "edges": [
        {"id": "e1", "src": "v1", "rng": "v1"},
        {"id": "e2", "src": "v2", "rng": "v1"},
        {"id": "e3", "src": "v2", "rng": "v2"},
    ],
})
FULL_SHIFT = json.dumps({
    "vertices": ["v"],
    "edges": [
        {"id": "a", "src": "v", "rng": "v"},
        {"id": "b", "src": "v", "rng": "v"},
    ],
})
SINGLE_LOOP = json.dumps({
    "vertices": ["v"],
    "edges": [{"id": "a", "src": "v", "rng": "v"}],
})
FS0 = json.dumps({"X": ["1", "2", "3"], "Y": ["a", "b"],
                  "sigma": {"1": "a", "2": "a", "3": "b"}})
COLLAPSE = json.dumps({"points": ["a", "b"], "sigma": {"a": "b", "b": "b"},
                       "metric": [["0", "1"], ["1", "0"]]})
SWAP = json.dumps({"points": ["p", "q"], "sigma": {"p": "q", "q": "p"}})


def build_module(dest: pathlib.Path) -> None:
    subprocess.run(["cargo", "build", "-p", "grpd-py", "--release"],
                   cwd=ROOT, check=True)
    shutil.copy(ROOT / "target" / "release" / "libgrpd.so", dest / "grpd.so")


def main() -> None:
    with tempfile.TemporaryDirectory() as td:
        build_module(pathlib.Path(td))
        sys.path.insert(0, td)
        import grpd

        decision = json.loads(grpd.decide_graph(FULL_SHIFT))
        assert decision["embeddable"] is False
        assert len(decision["verdicts"]) == 3
        assert json.loads(grpd.decide_graph(SINGLE_LOOP))["embeddable"] is True

        witness = json.loads(grpd.decide_graph(ENTRANCE))["verdicts"][0]["certificate"]
        assert witness == {"type": "witness", "f": ["0", "1"], "h": ["1", "0"]}

        report = json.loads(grpd.validate_graph(ENTRANCE))
        assert report["admissible"] is True and report["sinks"] == []

        h0 = json.loads(grpd.fibered_homology(FS0))
        assert h0["free_rank"] == 2 and h0["torsion"] == []
        assert h0["positive_cone"] == [["1", "0"], ["0", "1"]]
        assert json.loads(grpd.fibered_homology(FS0, 1))["free_rank"] == 0

        trace = json.loads(grpd.trace_identity(FS0))
        assert trace["fiber_sums"] == ["2", "1"]
        assert trace["trace"] == {"1": "2", "3": "1"}

        assert grpd.dimension_group_equal(ENTRANCE, 0, [1, 0], 1, [1, 0]) is True
        assert grpd.dimension_group_equal(ENTRANCE, 0, [1, 0], 0, [0, 1]) is False
        positive = json.loads(grpd.dimension_group_positive(ENTRANCE, 0, [-1, 2], 6))
        assert positive == {"positivity": "positive", "power": 1}

        loop = json.loads(grpd.pseudoloop(COLLAPSE, "b", "1/2"))
        assert loop["exists"] is True and loop["witness"] == ["b"]
        assert json.loads(grpd.pseudoloop(COLLAPSE, "a", "1/2"))["exists"] is False

        squeeze = json.loads(grpd.compression(SWAP))
        assert squeeze == {"exists": False, "subsets_checked": 4}

        snf = json.loads(grpd.smith_normal_form([[2, 4], [6, 8]]))
        assert snf["diagonal"] == ["2", "4"]

        try:
            grpd.decide_graph("{broken")
        except ValueError as e:
            assert "json" in str(e)
        else:
            raise AssertionError("malformed input must raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
