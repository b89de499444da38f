from __future__ import annotations

import io
import json
import re

import pytest

from d2kit.cli import main
from d2kit.formats import (
    parse_certificate_file,
    parse_complex_file,
    write_complex_file,
)
from d2kit.fox import presentation_complex
from d2kit.groupring import GroupRingElement, GroupRingMatrix
from d2kit.groups import catalog, catalog_entry, make_group
from d2kit.moves import certificate_ok, stabilize
from d2kit.chains import two_complex

_C2_PRES = """\
group cyclic 2
gens x
rel x x
"""

_TIETZE_PRES = """\
group cyclic 2
gens x y
rel x x
rel y
map y 0
"""

_ATTACHED_CPLX = """\
complex
group cyclic 2
ranks 1 1 2 1
d1:
(0, 0, -1*g0 + 1*g1)
d2:
(0, 0, 1*g0 + 1*g1)
d3:
(1, 0, 1*g0)
"""

_NOTINJ_CPLX = _ATTACHED_CPLX.replace("(1, 0, 1*g0)", "(1, 0, -1*g0 + 1*g1)")
_NOSPLIT_CPLX = _ATTACHED_CPLX.replace("(1, 0, 1*g0)", "(1, 0, 2*g0)")

_SCRIPT = """\
stab 2
transvect 2 1 0 1*g1
swap 2 1 2
"""


def _run(argv) -> tuple[int, str]:
    stream = io.StringIO()
    code = main([str(a) for a in argv], stream=stream)
    return code, stream.getvalue()


def _records(out: str) -> list[dict]:
    return [json.loads(line) for line in out.splitlines()]


def _presentation_text(entry) -> str:
    pres = entry.marked.presentation
    lines = [f"group {entry.marked.group.name}"]
    lines.append(("gens " + " ".join(pres.generators)).rstrip())
    for rel in pres.relators:
        toks = [
            pres.generators[g] if e == 1 else f"{pres.generators[g]}^-1"
            for g, e in rel.letters
        ]
        lines.append("rel " + " ".join(toks))
    for name, image in zip(pres.generators, entry.marked.genmap):
        lines.append(f"map {name} {image}")
    return "\n".join(lines) + "\n"


def test_catalog_plain_grammar():
    code, out = _run(["catalog"])
    assert code == 0
    lines = out.splitlines()
    assert all(
        re.match(r"^(INFO|CHECK|ENTRY|ERROR|#) ", line) for line in lines
    )
    entries = [line for line in lines if line.startswith("ENTRY ")]
    assert len(entries) == 17
    assert any("key=cyclic 6" in line and "order=6" in line for line in entries)
    assert any(
        "key=icosahedral" in line and "known_deficiency=-1" in line
        for line in entries
    )
    assert lines[-2] == "INFO exit 0"
    assert lines[-1].startswith("# elapsed ")


def test_catalog_structured():
    code, out = _run(["catalog", "--structured"])
    assert code == 0
    records = _records(out)  # every line must be valid JSON
    assert records[0] == {"kind": "info", "key": "command", "value": "d2kit catalog --structured"}
    assert records[-1] == {"kind": "exit", "code": 0}
    entries = [r for r in records if r["kind"] == "entry"]
    assert len(entries) == 17
    trivial = next(r for r in entries if r["key"] == "trivial")
    assert trivial["presentation"] == "< | >"
    assert trivial["chi"] == 1
    ico = next(r for r in entries if r["key"] == "icosahedral")
    assert ico["deficiency"] == -1 and ico["chi"] == 2
    code2, out2 = _run(["catalog", "--structured"])
    assert out2 == out  # bytewise deterministic


def test_build_verify_round_trip_whole_catalog(tmp_path):
    for entry in catalog():
        slug = entry.key.replace(" ", "-")
        pres = tmp_path / f"{slug}.pres"
        pres.write_text(_presentation_text(entry), encoding="utf-8")
        built = tmp_path / f"{slug}.cplx"
        code, out = _run(["build", pres, "--out", built])
        assert code == 0, (entry.key, out)
        assert parse_complex_file(built) == presentation_complex(entry.marked)
        code, out = _run(["verify", built])
        assert code == 0, (entry.key, out)
        assert "CHECK d1d2-zero PASS" in out
        assert "INFO homology H0: rank 1 torsion []" in out
        assert "INFO homology H1: rank 0 torsion []" in out


def test_build_reports_digest_and_ranks(tmp_path):
    pres = tmp_path / "c2.pres"
    pres.write_text(_C2_PRES, encoding="utf-8")
    built = tmp_path / "c2.cplx"
    code, out = _run(["build", pres, "--out", built, "--structured"])
    assert code == 0
    records = _records(out)
    infos = {r["key"]: r["value"] for r in records if r["kind"] == "info"}
    assert re.search(r" sha256 [0-9a-f]{64}$", infos["input"])
    assert infos["ranks"] == "1 1 1 0"
    assert infos["wrote"] == str(built)


def test_verify_split_branches(tmp_path):
    good = tmp_path / "attached.cplx"
    good.write_text(_ATTACHED_CPLX, encoding="utf-8")
    code, out = _run(["verify", good])
    assert code == 0
    assert "CHECK d2-split PASS splitting re-verified" in out

    notinj = tmp_path / "notinj.cplx"
    notinj.write_text(_NOTINJ_CPLX, encoding="utf-8")
    code, out = _run(["verify", notinj])
    assert code == 1
    assert "CHECK d2-split FAIL NotInjective kernel-rank 1" in out
    assert "INFO exit 1" in out

    nosplit = tmp_path / "nosplit.cplx"
    nosplit.write_text(_NOSPLIT_CPLX, encoding="utf-8")
    code, out = _run(["verify", nosplit])
    assert code == 1
    assert "CHECK d2-split FAIL NoSplit" in out


def test_invariants_on_presentation(tmp_path):
    pres = tmp_path / "c2.pres"
    pres.write_text(_C2_PRES, encoding="utf-8")
    code, out = _run(["invariants", pres])
    assert code == 0
    assert "INFO chi 1" in out
    assert "INFO pi2-rank 1" in out
    assert "INFO relation-module-rank 1" in out
    assert "CHECK euler-lower-bound PASS" in out
    assert "CHECK euler-deficiency PASS" in out


def test_invariants_on_3_complex(tmp_path):
    cplx = tmp_path / "attached.cplx"
    cplx.write_text(_ATTACHED_CPLX, encoding="utf-8")
    code, out = _run(["invariants", cplx])
    assert code == 0
    assert "INFO pi2-rank skipped (3-complex)" in out
    assert "INFO euler-deficiency skipped (not a one-vertex 2-complex)" in out
    assert "CHECK euler-lower-bound PASS" in out


def test_invariants_icosahedral(tmp_path):
    entry = catalog_entry("icosahedral")
    pres = tmp_path / "ico.pres"
    pres.write_text(_presentation_text(entry), encoding="utf-8")
    code, out = _run(["invariants", pres])
    assert code == 0
    assert "INFO chi 2" in out
    assert "INFO pi2-rank 119" in out  # 60 * 2 - 1
    assert "INFO relation-module-rank 61" in out  # (2 - 1) * 60 + 1
    assert "CHECK euler-deficiency PASS chi = 2, 1 - (g - r) = 2" in out


def test_reduce_writes_complex_and_certificate(tmp_path):
    cplx = tmp_path / "attached.cplx"
    cplx.write_text(_ATTACHED_CPLX, encoding="utf-8")
    reduced = tmp_path / "reduced.cplx"
    code, out = _run(["reduce", cplx, "--out", reduced])
    assert code == 0
    assert "INFO chi 1 -> 2" in out
    assert "CHECK cone-acyclic PASS" in out
    assert "CHECK log-replays PASS" in out
    back = parse_complex_file(reduced)
    assert back.ranks == (1, 1, 2, 0)
    cert = parse_certificate_file(tmp_path / "reduced.cplx.cert")
    assert certificate_ok(cert)
    assert cert.target == back


def test_reduce_not_injective_exits_1(tmp_path):
    cplx = tmp_path / "notinj.cplx"
    cplx.write_text(_NOTINJ_CPLX, encoding="utf-8")
    out_path = tmp_path / "never.cplx"
    code, out = _run(["reduce", cplx, "--out", out_path])
    assert code == 1
    assert "ERROR NotInjective: d3 has integer kernel rank 1" in out
    assert not out_path.exists()

    cplx2 = tmp_path / "nosplit.cplx"
    cplx2.write_text(_NOSPLIT_CPLX, encoding="utf-8")
    code, out = _run(["reduce", cplx2, "--out", out_path])
    assert code == 1
    assert "ERROR NoSplit" in out


def test_compare_tietze_pair_with_certificate(tmp_path):
    for name, text in (("c2.pres", _C2_PRES), ("tietze.pres", _TIETZE_PRES)):
        (tmp_path / name).write_text(text, encoding="utf-8")
    left = tmp_path / "left.cplx"
    right = tmp_path / "right.cplx"
    assert _run(["build", tmp_path / "c2.pres", "--out", left])[0] == 0
    assert _run(["build", tmp_path / "tietze.pres", "--out", right])[0] == 0
    cert_path = tmp_path / "pair.cert"
    code, out = _run(["compare", left, right, "--out", cert_path])
    assert code == 0
    assert "CHECK cone-acyclic PASS" in out
    assert "CHECK log-endpoint PASS" in out
    cert = parse_certificate_file(cert_path)
    assert certificate_ok(cert)


def test_compare_budget_unknown(tmp_path):
    group = make_group("cyclic", 2)
    one = GroupRingElement.one(group)
    x = GroupRingElement.unit(group, 1)
    d1 = GroupRingMatrix(group, 1, 1, {(0, 0): x - one})
    plain = two_complex(group, d1, GroupRingMatrix(group, 1, 1, {(0, 0): one + x}))
    left_cplx, _ = stabilize(plain, 1)
    right_cplx = two_complex(
        group,
        d1,
        GroupRingMatrix(group, 1, 2, {(0, 0): one + x, (0, 1): (one + x) * 2}),
    )
    left = tmp_path / "left.cplx"
    right = tmp_path / "right.cplx"
    write_complex_file(left, left_cplx)
    write_complex_file(right, right_cplx)
    code, out = _run(["compare", left, right, "--budget", 1])
    assert code == 1
    assert "CHECK equivalence FAIL Unknown: budget exhausted after 2 candidates" in out
    code, out = _run(["compare", left, right])
    assert code == 0


def test_compare_rejects_mismatched_groups(tmp_path):
    left = tmp_path / "left.cplx"
    right = tmp_path / "right.cplx"
    write_complex_file(left, presentation_complex(catalog_entry("cyclic 2").marked))
    write_complex_file(right, presentation_complex(catalog_entry("cyclic 3").marked))
    code, out = _run(["compare", left, right])
    assert code == 2
    assert "ERROR comparison needs complexes over the same group" in out
    assert "INFO exit 2" in out


def test_apply_script(tmp_path):
    cplx = tmp_path / "c2.cplx"
    write_complex_file(cplx, presentation_complex(catalog_entry("cyclic 2").marked))
    script = tmp_path / "script.mv"
    script.write_text(_SCRIPT, encoding="utf-8")
    out_path = tmp_path / "moved.cplx"
    code, out = _run(["apply", cplx, script, "--out", out_path])
    assert code == 0
    assert "INFO moves 5" in out  # swap expands to three transvections
    assert "INFO ranks 1 1 3 0" in out
    moved = parse_complex_file(out_path)
    assert moved.ranks == (1, 1, 3, 0)


def test_apply_bad_move_exits_2(tmp_path):
    cplx = tmp_path / "c2.cplx"
    write_complex_file(cplx, presentation_complex(catalog_entry("cyclic 2").marked))
    script = tmp_path / "bad.mv"
    script.write_text("attach 0\n", encoding="utf-8")  # column 0 is the relator
    code, out = _run(["apply", cplx, script])
    assert code == 2
    assert "ERROR move 0 (attach 0):" in out


def test_malformed_input_exits_2(tmp_path):
    bad = tmp_path / "bad.pres"
    bad.write_text("group cyclic 2\nrel x x\n", encoding="utf-8")
    code, out = _run(["build", bad, "--out", tmp_path / "x.cplx"])
    assert code == 2
    assert "ERROR line 2: rel before gens" in out

    garbage = tmp_path / "garbage.cplx"
    garbage.write_text("not a complex\n", encoding="utf-8")
    code, out = _run(["verify", garbage])
    assert code == 2


def test_argparse_rejects_bad_usage():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["reduce", "whatever.cplx"])  # --out is required
    assert exc.value.code == 2


def test_structured_mode_has_no_timing_line(tmp_path):
    pres = tmp_path / "c2.pres"
    pres.write_text(_C2_PRES, encoding="utf-8")
    code, out = _run(["invariants", pres, "--structured"])
    assert code == 0
    assert "# elapsed" not in out
    records = _records(out)
    assert records[-1] == {"kind": "exit", "code": 0}
    code, plain = _run(["invariants", pres])
    assert plain.splitlines()[-1].startswith("# elapsed ")


def test_structured_runs_are_reproducible(tmp_path):
    cplx = tmp_path / "attached.cplx"
    cplx.write_text(_ATTACHED_CPLX, encoding="utf-8")
    runs = {_run(["verify", cplx, "--structured"])[1] for _ in range(3)}
    assert len(runs) == 1


def test_missing_file_is_an_input_error(tmp_path):
    code, out = _run(["verify", tmp_path / "nope.cplx"])
    assert code == 2
    assert "ERROR" in out and "nope.cplx" in out
    assert "Traceback" not in out
