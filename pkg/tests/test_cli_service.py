import json
import threading
import urllib.error
import urllib.request

import pytest

from cnlkit.cli import main
from cnlkit.service import make_server
from cnlkit.session import Session


@pytest.fixture()
def discount_file(tmp_path, discount_doc):
    p = tmp_path / "discount.cnl"
    p.write_text(discount_doc, encoding="utf-8")
    return str(p)


# --- CLI ----------------------------------------------------------------------


def test_cli_translate(discount_file, capsys):
    assert main(["translate", discount_file]) == 0
    out = capsys.readouterr().out
    assert "overrides(r2, r1)." in out
    assert "cancel(handle(r2" in out
    assert "cancel(handle(r3" in out
    assert "?Amount1 != ?Amount2" in out


def test_cli_translate_empty_document(tmp_path, capsys):
    p = tmp_path / "empty.cnl"
    p.write_text("", encoding="utf-8")
    assert main(["translate", str(p)]) == 0
    assert capsys.readouterr().out == ""


def test_cli_translate_unknown_word(tmp_path, capsys):
    p = tmp_path / "bad.cnl"
    p.write_text("Tom zzzz.", encoding="utf-8")
    assert main(["translate", str(p)]) != 0
    err = capsys.readouterr().err
    assert "zzzz" in err


def test_cli_ask_cnl_question(discount_file, capsys):
    assert main(["ask", discount_file, "How much discount does John get for buying a coke?"]) == 0
    out = capsys.readouterr().out
    assert "$2.50" in out
    assert "r2" in out and "9.m" in out


def test_cli_ask_raw_goal_unknown(discount_file, capsys):
    assert main(["ask", discount_file, "discount(John, lobster, ?A)"]) == 0
    assert "unknown" in capsys.readouterr().out


def test_cli_ask_empty_session(tmp_path, capsys):
    p = tmp_path / "empty.cnl"
    p.write_text("", encoding="utf-8")
    assert main(["ask", str(p), "discount(John, coke, ?A)"]) == 2
    assert "no knowledge base" in capsys.readouterr().err


def test_cli_asp_solve_exit_codes(tmp_path, fixtures, capsys):
    assert main(["asp", "solve", fixtures("marathon.asp")]) == 0
    out = capsys.readouterr().out
    assert "answer(ignace, 1)" in out
    nomodel = tmp_path / "odd.asp"
    nomodel.write_text("p :- not p.", encoding="utf-8")
    assert main(["asp", "solve", str(nomodel)]) == 1
    bad = tmp_path / "bad.asp"
    bad.write_text("p :- q r.", encoding="utf-8")
    assert main(["asp", "solve", str(bad)]) == 2


def test_cli_circ(fixtures, capsys):
    assert main(["circ", fixtures("eagle.circ"), "--query", "fly(eagle)"]) == 0
    assert "entailed" in capsys.readouterr().out
    assert main(["circ", fixtures("eagle.circ"), "--query", "ab(eagle)"]) == 0
    assert "not entailed" in capsys.readouterr().out


def test_cli_lex_check(tmp_path, capsys):
    p = tmp_path / "mini.lex"
    p.write_text("noun(dog, dog). syn(dog, dog). illegal(could).", encoding="utf-8")
    assert main(["lex", "check", str(p)]) == 0
    assert "1 entries" in capsys.readouterr().out


def test_cli_parse_json(capsys):
    assert main(["parse", "--format", "json", "Tom walks."]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["trees"]
    assert payload["complete"]


# --- HTTP service -----------------------------------------------------------------


@pytest.fixture()
def server():
    srv = make_server("127.0.0.1", 0, Session)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield "http://127.0.0.1:%d" % srv.server_address[1]
    srv.shutdown()
    srv.server_close()


def post(base, path, payload):
    req = urllib.request.Request(
        base + path, data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"},
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_health(server):
    with urllib.request.urlopen(server + "/health") as resp:
        assert json.loads(resp.read()) == {"ok": True}


def test_parse_endpoint_empty_tokens(server):
    status, body = post(server, "/parse", {"tokens": []})
    assert status == 200
    assert body["trees"] == []
    assert body["errors"] == []


def test_lookahead_endpoint(server):
    status, body = post(server, "/lookahead", {"tokens": ["Tom", "walks"]})
    assert status == 200
    assert body["complete"]
    assert "adv" in body["categories"]
    assert "slowly" in body["words"]


def test_sentence_translate_query_flow(server, discount_doc):
    session = {"session": "flow"}
    for line in discount_doc.strip().splitlines():
        label, text = line.split("] ", 1)
        status, body = post(server, "/sentence", {"text": text, "label": label[1:], **session})
        assert status == 200, body
    status, body = post(server, "/query", {"goal": "discount(Mary, salmon, ?A)", **session})
    assert status == 200
    assert body["answers"] == [{"A": "5.00"}]
    assert body["status"] == "yes"
    assert any(p.get("sentence") == "9.o" for p in body["provenance"])


def test_service_cli_byte_identical(server, discount_doc, discount_file, capsys):
    session = {"session": "bytes"}
    for line in discount_doc.strip().splitlines():
        label, text = line.split("] ", 1)
        status, _ = post(server, "/sentence", {"text": text, "label": label[1:], **session})
        assert status == 200
    _, body = post(server, "/translate", session)
    assert main(["translate", discount_file]) == 0
    cli_text = capsys.readouterr().out
    assert body["program"] == cli_text


def test_sentence_rejection_carries_suggestions(server):
    status, body = post(server, "/sentence", {"text": "Tom walks walks."})
    assert status == 422
    assert body["error"]["code"] == "rejected"


def test_query_without_kb(server):
    status, body = post(server, "/query", {"goal": "p(a)", "session": "fresh"})
    assert status == 422
    assert "no knowledge base" in body["error"]["message"]


def test_malformed_json_is_400(server):
    req = urllib.request.Request(
        server + "/parse", data=b"{oops", headers={"Content-Type": "application/json"}
    )
    with pytest.raises(urllib.error.HTTPError) as exc:
        urllib.request.urlopen(req)
    assert exc.value.code == 400
    assert json.loads(exc.value.read())["error"]["code"] == "bad_json"


def test_response_schema_roundtrip(server):
    status, body = post(server, "/lookahead", {"tokens": []})
    assert status == 200
    assert json.loads(json.dumps(body)) == body


def test_sessions_are_isolated(server):
    post(server, "/sentence", {"text": "Tom walks.", "session": "a"})
    status, body = post(server, "/translate", {"session": "b"})
    assert status == 200
    assert body["program"] == ""


def test_session_save_load_roundtrip(tmp_path, discount_doc):
    s1 = Session()
    s1.load_document(discount_doc)
    path = str(tmp_path / "doc.json")
    s1.save_document(path)
    s2 = Session()
    s2.load_saved_document(path)
    assert s2.program_text() == s1.program_text()
    assert [r.id for r in s2.records] == [r.id for r in s1.records]
