import httpx
import pytest

from scenebench.agents import HttpDecisionBackend
from scenebench.errors import TransportError
from scenebench.taskgen.instructions import HttpRewriter
from scenebench.wkm import HttpEmbeddingProvider


class FakePost:
    """Stand-in for httpx.post returning canned JSON, counting calls."""

    def __init__(self, payloads, fail_times=0):
        self.payloads = payloads
        self.fail_times = fail_times
        self.calls = []

    def __call__(self, url, json=None, timeout=None):
        self.calls.append(json)
        if self.fail_times > 0:
            self.fail_times -= 1
            raise httpx.ConnectError("refused")
        request = httpx.Request("POST", url)
        return httpx.Response(200, json=self.payloads(json), request=request)


def test_embedding_provider_cosine(monkeypatch):
    vectors = {"a": [1.0, 0.0], "b": [0.0, 1.0], "c": [1.0, 0.0]}

    def payload(body):
        return {"vectors": [vectors[t] for t in body["texts"]]}

    fake = FakePost(payload)
    monkeypatch.setattr(httpx, "post", fake)
    provider = HttpEmbeddingProvider("http://embed.test")
    assert provider.similarity("a", "c") == pytest.approx(1.0)
    assert provider.similarity("a", "b") == pytest.approx(0.0)
    # cached: three unique texts, three requests
    assert len(fake.calls) == 3


def test_embedding_provider_retries_then_fails(monkeypatch):
    fake = FakePost(lambda body: {"vectors": [[1.0]]}, fail_times=10)
    monkeypatch.setattr(httpx, "post", fake)
    provider = HttpEmbeddingProvider("http://embed.test", retries=2)
    with pytest.raises(TransportError):
        provider.embed("anything")
    assert len(fake.calls) == 3  # initial try plus two retries


def test_embedding_provider_env(monkeypatch):
    monkeypatch.delenv("SCENEBENCH_EMBED_URL", raising=False)
    assert HttpEmbeddingProvider.from_env() is None
    monkeypatch.setenv("SCENEBENCH_EMBED_URL", "http://embed.test")
    monkeypatch.setenv("SCENEBENCH_EMBED_TIMEOUT", "3")
    provider = HttpEmbeddingProvider.from_env()
    assert provider.url == "http://embed.test"
    assert provider.timeout == 3.0


def test_rewriter_round_trip(monkeypatch):
    fake = FakePost(lambda body: {"text": body["text"].upper()})
    monkeypatch.setattr(httpx, "post", fake)
    rewriter = HttpRewriter("http://llm.test")
    assert rewriter("the chair") == "THE CHAIR"


def test_decision_backend_wire_contract(monkeypatch):
    def payload(body):
        assert body["mode"] == "reason"
        assert body["candidates"][0]["index"] == 0
        assert "prompt" in body
        return {"choice": 1}

    fake = FakePost(payload)
    monkeypatch.setattr(httpx, "post", fake)
    backend = HttpDecisionBackend("http://decide.test")
    choice = backend.decide([(0, "a chair"), (1, "a table")], ["find the table"], "", True)
    assert choice == 1


def test_decision_backend_speak(monkeypatch):
    fake = FakePost(lambda body: {"question": "What color is it?"})
    monkeypatch.setattr(httpx, "post", fake)
    backend = HttpDecisionBackend("http://decide.test")
    assert backend.speak([(0, "a chair")], [], "") == "What color is it?"


def test_decision_backend_transport_error(monkeypatch):
    fake = FakePost(lambda body: {}, fail_times=5)
    monkeypatch.setattr(httpx, "post", fake)
    backend = HttpDecisionBackend("http://decide.test")
    with pytest.raises(TransportError):
        backend.decide([(0, "a chair")], [], "", False)
