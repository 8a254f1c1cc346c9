import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from robustaug.errors import TransportError
from robustaug.textaug import (
    DictionaryTranslator,
    HttpTranslator,
    IdentityTranslator,
    TranslationCache,
    back_translate,
    back_translate_many,
    tokenize,
)

SENTENCE_2 = "A man on a ladder cleans the window of a tall building."


def test_identity_stub_roundtrip():
    seq = tokenize(SENTENCE_2)
    out = back_translate(seq, IdentityTranslator(), "de")
    assert out.tokens == seq.tokens
    assert out.original_text == SENTENCE_2
    assert out.meta["translator"] == "identity"
    assert out.meta["pivot"] == "de"


def test_dictionary_stub_roundtrip():
    translator = DictionaryTranslator(
        forward={"building": "GEBOUW"},
        backward={"gebouw": "tower block"},
        pivot="xx",
    )
    seq = tokenize(SENTENCE_2)
    out = back_translate(seq, translator, "xx")
    assert out.original_text == "A man on a ladder cleans the window of a tall tower block."


def test_cache_avoids_repeat_calls(tmp_path):
    calls = []

    class CountingTranslator:
        identity = "counting"

        def translate(self, text, source_lang, target_lang):
            calls.append((text, source_lang, target_lang))
            return text.upper() if target_lang == "xx" else text.lower()

    cache = TranslationCache(tmp_path / "cache.jsonl")
    seq = tokenize("A dog runs.")
    first = back_translate(seq, CountingTranslator(), "xx", cache=cache)
    assert len(calls) == 2
    second = back_translate(seq, CountingTranslator(), "xx", cache=cache)
    assert len(calls) == 2  # both hops served from cache
    assert first.original_text == second.original_text

    # cache reloads from disk
    reloaded = TranslationCache(tmp_path / "cache.jsonl")
    assert len(reloaded) == 2


def _serve(handler_cls):
    server = HTTPServer(("127.0.0.1", 0), handler_cls)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def test_http_translator_wire_contract():
    class Reverser(BaseHTTPRequestHandler):
        def do_POST(self):
            body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            assert set(body) == {"text", "source_lang", "target_lang"}
            reply = json.dumps({"text": body["text"][::-1]}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(reply)))
            self.end_headers()
            self.wfile.write(reply)

        def log_message(self, *args):
            pass

    server = _serve(Reverser)
    try:
        endpoint = f"http://127.0.0.1:{server.server_port}/translate"
        translator = HttpTranslator(endpoint)
        assert translator.translate("abc", "en", "de") == "cba"
        # double reversal is the identity: a working round trip
        out = back_translate(tokenize("A dog runs."), translator, "de")
        assert out.original_text == "A dog runs."
    finally:
        server.shutdown()


def test_http_translator_unreachable_raises_transport_error():
    translator = HttpTranslator("http://127.0.0.1:9/nope", timeout=0.2)
    seq = tokenize(SENTENCE_2)
    with pytest.raises(TransportError) as excinfo:
        back_translate(seq, translator, "de")
    assert excinfo.value.text == SENTENCE_2


def test_back_translate_many_bounded_pool():
    seqs = [tokenize(f"A dog runs in field {i}.") for i in range(8)]
    outs = back_translate_many(seqs, IdentityTranslator(), "de", max_in_flight=3)
    assert [o.original_text for o in outs] == [s.original_text for s in seqs]
