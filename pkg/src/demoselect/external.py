"""Client side of the external evaluator protocol.

The child process speaks newline-delimited JSON over stdin/stdout:

    child -> parent   {"type":"hello","version":1,"orientation":"higher_better"}
    parent -> child   {"type":"evaluate","id":N,"demos":[ids],"query":id}
    child -> parent   {"type":"result","id":N,"score":num} |
                      {"type":"error","id":N,"message":str}
    parent -> child   {"type":"shutdown"}   (child must exit 0 within 5 s)

One request is in flight at a time; responses must echo the request id.
Scores reported under a "lower_better" handshake are negated into canonical
higher-is-better utilities.
"""

from __future__ import annotations

import json
import math
import queue
import subprocess
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .core import DemoSet, SampleId
from .errors import EvaluatorCrashed, ProtocolError, Timeout
from .oracle import Evaluator

ORIENTATIONS = ("higher_better", "lower_better")
PROTOCOL_VERSION = 1


@dataclass
class ExternalConfig:
    command: Sequence[str]
    request_timeout: float = 60.0
    startup_timeout: float = 15.0
    shutdown_timeout: float = 5.0
    cwd: str | None = None
    extra_env: dict[str, str] = field(default_factory=dict)


class ExternalEvaluator(Evaluator):
    """Evaluator backed by a child process; serializes requests."""

    source_metric = "external"

    def __init__(self, config: ExternalConfig):
        super().__init__()
        self.config = config
        env = None
        if config.extra_env:
            import os

            env = {**os.environ, **config.extra_env}
        try:
            self._proc = subprocess.Popen(
                list(config.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
                cwd=config.cwd,
                env=env,
            )
        except OSError as exc:
            raise EvaluatorCrashed(f"failed to start evaluator: {exc}") from None
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        self._req_lock = threading.Lock()
        self._next_id = 0
        self._closed = False
        try:
            hello = self._read_message(config.startup_timeout)
            if hello.get("type") != "hello":
                raise ProtocolError(f"expected hello handshake, got {hello!r}")
            if hello.get("version") != PROTOCOL_VERSION:
                raise ProtocolError(
                    f"unsupported protocol version {hello.get('version')!r}"
                )
            orientation = hello.get("orientation")
            if orientation not in ORIENTATIONS:
                raise ProtocolError(f"unknown orientation {orientation!r}")
        except Exception:
            if self._proc.poll() is None:
                self._proc.kill()
                self._proc.wait()
            raise
        self._negate = orientation == "lower_better"

    def _pump(self) -> None:
        stream = self._proc.stdout
        assert stream is not None
        for line in stream:
            self._lines.put(line)
        self._lines.put(None)

    def _read_message(self, timeout: float) -> dict:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            raise Timeout(
                f"no response from evaluator within {timeout} s"
            ) from None
        if line is None:
            raise EvaluatorCrashed(
                f"evaluator exited (code {self._proc.poll()}) mid-conversation"
            )
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed response line: {exc}") from None
        if not isinstance(msg, dict):
            raise ProtocolError(f"response must be a JSON object, got {msg!r}")
        return msg

    def _send(self, obj: dict) -> None:
        stdin = self._proc.stdin
        assert stdin is not None
        try:
            stdin.write(json.dumps(obj) + "\n")
            stdin.flush()
        except (BrokenPipeError, OSError):
            raise EvaluatorCrashed(
                f"evaluator exited (code {self._proc.poll()}) while receiving"
            ) from None

    def _value(self, demos: DemoSet, query: SampleId) -> float:
        with self._req_lock:
            rid = self._next_id
            self._next_id += 1
            self._send(
                {"type": "evaluate", "id": rid, "demos": list(demos.members), "query": query}
            )
            resp = self._read_message(self.config.request_timeout)
        kind = resp.get("type")
        if kind == "error":
            raise ProtocolError(f"evaluator error: {resp.get('message')!r}")
        if kind != "result":
            raise ProtocolError(f"expected result, got {resp!r}")
        if resp.get("id") != rid:
            raise ProtocolError(
                f"response id {resp.get('id')!r} does not echo request id {rid}"
            )
        score = resp.get("score")
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise ProtocolError(f"score must be a number, got {score!r}")
        score = float(score)
        if not math.isfinite(score):
            raise ProtocolError(f"score must be finite, got {score!r}")
        return -score if self._negate else score

    def close(self) -> int:
        """Request shutdown and wait for the child; returns its exit code."""
        if self._closed:
            return self._proc.returncode
        self._closed = True
        if self._proc.poll() is None:
            try:
                self._send({"type": "shutdown"})
            except EvaluatorCrashed:
                pass
        try:
            code = self._proc.wait(timeout=self.config.shutdown_timeout)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()
            raise Timeout(
                f"evaluator did not exit within {self.config.shutdown_timeout} s"
            ) from None
        self._reader.join(timeout=1.0)
        return code

    def __enter__(self) -> "ExternalEvaluator":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.close()
        else:
            # Best effort teardown; keep the original exception.
            try:
                self.close()
            except Exception:
                self._proc.kill()


def external_evaluate(config: ExternalConfig, demos: DemoSet, query: SampleId):
    """One-off evaluation through a freshly spawned child process."""
    with ExternalEvaluator(config) as ev:
        return ev.evaluate(demos, query)
