"""HTTP/JSON service over the pipeline.

Endpoints (all JSON):

    GET  /health                          -> {"ok": true}
    POST /parse     {tokens}              -> {edges, trees, errors}
    POST /lookahead {tokens}              -> {categories, words, complete}
    POST /sentence  {text, annotation?, label?, session?}
                                          -> {sentence_id, mode, drs}
    POST /translate {session?}            -> {program}
    POST /query     {goal, session?}      -> {status, answers, provenance,
                                              inconsistent, rendered}

Sessions are in-memory, keyed by the ``session`` token (default
"default"); document mutations are serialized per session, and each
request runs against an immutable translation snapshot.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable

from .builder import SentenceError
from .chart import ParseFailure, extract_trees
from .lexicon import IllegalWordError
from .session import Session
from .translator import TranslationError


class ServiceState:
    def __init__(self, session_factory: Callable[[], Session]):
        self.session_factory = session_factory
        self.sessions: dict[str, Session] = {}
        self.locks: dict[str, threading.Lock] = {}
        self.guard = threading.Lock()

    def session(self, token: str) -> tuple[Session, threading.Lock]:
        with self.guard:
            if token not in self.sessions:
                self.sessions[token] = self.session_factory()
                self.locks[token] = threading.Lock()
            return self.sessions[token], self.locks[token]


class _Handler(BaseHTTPRequestHandler):
    state: ServiceState

    def log_message(self, fmt, *args):  # keep tests quiet
        pass

    def _send(self, code: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()

    def do_GET(self):
        if self.path == "/health":
            self._send(200, {"ok": True})
        else:
            self._send(404, {"error": {"code": "not_found", "message": self.path}})

    def do_POST(self):
        try:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                body = json.loads(raw.decode("utf-8")) if raw.strip() else {}
            except (ValueError, UnicodeDecodeError) as exc:
                self._send(400, {"error": {"code": "bad_json", "message": str(exc)}})
                return
            if not isinstance(body, dict):
                self._send(400, {"error": {"code": "bad_json", "message": "expected a JSON object"}})
                return
            handler = {
                "/parse": self._parse,
                "/lookahead": self._lookahead,
                "/sentence": self._sentence,
                "/translate": self._translate,
                "/query": self._query,
            }.get(self.path)
            if handler is None:
                self._send(404, {"error": {"code": "not_found", "message": self.path}})
                return
            handler(body)
        except BrokenPipeError:
            pass
        except Exception as exc:  # noqa: BLE001 - report, do not crash the server
            self._send(500, {"error": {"code": "internal", "message": str(exc)}})

    # -- endpoint bodies -----------------------------------------------------

    def _session(self, body: dict) -> tuple[Session, threading.Lock]:
        token = str(body.get("session", "default"))
        return self.state.session(token)

    def _parse(self, body: dict) -> None:
        tokens = body.get("tokens")
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            self._send(400, {"error": {"code": "bad_request", "message": "tokens must be a list of strings"}})
            return
        session, _ = self._session(body)
        try:
            chart = session.parse_tokens(tokens)
        except (ParseFailure, IllegalWordError) as exc:
            self._send(200, {"edges": [], "trees": [], "errors": [str(exc)]})
            return
        self._send(200, {
            "edges": chart.dump().splitlines(),
            "trees": [str(t) for t in extract_trees(chart)],
            "errors": [],
        })

    def _lookahead(self, body: dict) -> None:
        tokens = body.get("tokens")
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            self._send(400, {"error": {"code": "bad_request", "message": "tokens must be a list of strings"}})
            return
        session, _ = self._session(body)
        try:
            la = session.lookahead_for(tokens)
        except (ParseFailure, IllegalWordError) as exc:
            self._send(200, {"categories": [], "words": [], "complete": False, "errors": [str(exc)]})
            return
        self._send(200, {
            "categories": la.category_names(),
            "words": la.words(),
            "by_category": {c: list(ws) for c, ws in la.categories},
            "complete": la.sentence_complete,
            "errors": [],
        })

    def _sentence(self, body: dict) -> None:
        text = body.get("text")
        if not isinstance(text, str) or not text.strip():
            self._send(400, {"error": {"code": "bad_request", "message": "text must be a nonempty string"}})
            return
        annotation = body.get("annotation")
        if annotation:
            text = "(%s) %s" % (annotation, text)
        session, lock = self._session(body)
        with lock:
            try:
                rec = session.add_sentence(text, label=body.get("label"))
            except (SentenceError, IllegalWordError, ParseFailure) as exc:
                self._send(422, {"error": {"code": "rejected", "message": str(exc),
                                           "suggestions": getattr(exc, "suggestions", [])}})
                return
        self._send(200, {
            "sentence_id": rec.id,
            "mode": rec.mode,
            "exception": list(rec.exception[1]) if rec.exception else [],
            "cancel_targets": list(rec.cancel_targets),
            "drs": session.drs_text(),
        })

    def _translate(self, body: dict) -> None:
        session, lock = self._session(body)
        with lock:
            try:
                text = session.program_text()
            except TranslationError as exc:
                self._send(422, {"error": {"code": "translation", "message": str(exc)}})
                return
        self._send(200, {"program": text})

    def _query(self, body: dict) -> None:
        goal = body.get("goal")
        if not isinstance(goal, str) or not goal.strip():
            self._send(400, {"error": {"code": "bad_request", "message": "goal must be a nonempty string"}})
            return
        session, lock = self._session(body)
        with lock:
            try:
                answer = session.ask(goal)
            except ValueError as exc:
                self._send(422, {"error": {"code": "query", "message": str(exc)}})
                return
        self._send(200, {
            "status": answer.status,
            "answers": answer.bindings,
            "provenance": answer.provenance,
            "inconsistent": answer.inconsistent,
            "rendered": answer.rendered,
        })


def make_server(host: str, port: int, session_factory: Callable[[], Session]) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"state": ServiceState(session_factory)})
    return ThreadingHTTPServer((host, port), handler)


def run_server(host: str, port: int, session_factory: Callable[[], Session]) -> None:
    server = make_server(host, port, session_factory)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
