"""Real-time mode: a paced hop loop over looped file sources, steered by
JSON control messages over a WebSocket.

The audio thread and the control plane share exactly two things: a
single-value mailbox for k (read once at the start of every hop) and a
latest-status slot guarded by a lock held only for the copy. Network
activity can therefore never stall hop processing.
"""
from __future__ import annotations

import asyncio
import json
import logging
import threading
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .audio_io import read_wav, to_mono
from .engine import Engine
from .reassign import DEFAULT_MIN_REGION_FRACTION
from .stft import AnalysisConfig

log = logging.getLogger("specglide.live")

STATUS_INTERVAL = 0.1  # seconds; caps the status stream at 10 Hz


@dataclass
class Status:
    k: float
    rms: float
    hop: int

    def frame(self) -> dict:
        return {"kind": "status", "k": self.k, "rms": self.rms, "hop": self.hop}


def clamp_k(value: float) -> float:
    return min(max(float(value), 0.0), 1.0)


class LiveEngine:
    """Paced engine over two looped mono sources.

    The hop loop runs on its own thread; k updates land through
    ``set_k`` and take effect at the next hop.
    """

    def __init__(
        self,
        source_a: np.ndarray,
        source_b: np.ndarray,
        config: AnalysisConfig | None = None,
        min_region_fraction: float = DEFAULT_MIN_REGION_FRACTION,
        sink: Callable[[np.ndarray], None] | None = None,
        realtime: bool = True,
    ):
        self.config = config or AnalysisConfig()
        self._engine = Engine(self.config, min_region_fraction)
        self._sources = [self._prepare(source_a), self._prepare(source_b)]
        self._positions = [0, 0]
        self._source_lock = threading.Lock()
        self._k = 0.0
        self._sink = sink
        self._realtime = realtime
        self._status = Status(k=0.0, rms=0.0, hop=0)
        self._status_lock = threading.Lock()
        self._running = threading.Event()
        self._running.set()
        self._shutdown = threading.Event()
        self._thread: threading.Thread | None = None

    def _prepare(self, samples: np.ndarray) -> np.ndarray:
        mono = to_mono(samples)
        if len(mono) < self.config.hop_length:
            reps = -(-self.config.hop_length // max(len(mono), 1))
            mono = np.tile(mono, reps)
        return np.asarray(mono, dtype=float)

    # -- control surface (any thread) --------------------------------

    def set_k(self, value: float) -> float:
        k = clamp_k(value)
        self._k = k  # single attribute write: the hop loop reads it once per hop
        return k

    def set_source(self, slot: str, samples: np.ndarray) -> None:
        index = {"A": 0, "B": 1}[slot]
        prepared = self._prepare(samples)
        with self._source_lock:
            self._sources[index] = prepared
            self._positions[index] = 0

    def pause(self) -> None:
        self._running.clear()

    def resume(self) -> None:
        self._running.set()

    def status(self) -> Status:
        with self._status_lock:
            return Status(self._status.k, self._status.rms, self._status.hop)

    # -- hop loop (audio thread) --------------------------------------

    def _next_hops(self) -> tuple[np.ndarray, np.ndarray]:
        hop = self.config.hop_length
        out = []
        with self._source_lock:
            for i, source in enumerate(self._sources):
                pos = self._positions[i]
                idx = (pos + np.arange(hop)) % len(source)
                out.append(source[idx])
                self._positions[i] = (pos + hop) % len(source)
        return out[0], out[1]

    def run_hops(self, n_hops: int | None = None) -> None:
        """Process hops until shutdown (or for n_hops), paced to real time."""
        hop_duration = self.config.hop_duration
        deadline = time.perf_counter()
        done = 0
        while not self._shutdown.is_set():
            if n_hops is not None and done >= n_hops:
                break
            if not self._running.is_set():
                time.sleep(0.005)
                deadline = time.perf_counter()
                continue
            k = self._k
            hop_a, hop_b = self._next_hops()
            out = self._engine.process_hop(hop_a, hop_b, k)
            rms = float(np.sqrt(np.mean(out**2)))
            with self._status_lock:
                self._status = Status(k=k, rms=rms, hop=self._engine.hop_index)
            if self._sink is not None:
                self._sink(out)
            done += 1
            if self._realtime:
                deadline += hop_duration
                pause = deadline - time.perf_counter()
                if pause > 0:
                    time.sleep(pause)
                else:
                    deadline = time.perf_counter()  # fell behind: don't spiral

    def start(self) -> None:
        self._thread = threading.Thread(target=self.run_hops, daemon=True)
        self._thread.start()

    def shutdown(self) -> None:
        self._shutdown.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)


def handle_message(live: LiveEngine, raw: str | bytes) -> dict | None:
    """Apply one control message; returns an immediate reply frame or None.

    Malformed messages are ignored with a logged warning.
    """
    try:
        message = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError):
        log.warning("ignoring non-JSON control message: %r", raw)
        return None
    if not isinstance(message, dict):
        log.warning("ignoring non-object control message: %r", message)
        return None
    kind = message.get("kind")
    if kind == "set_k":
        try:
            live.set_k(float(message["k"]))
        except (KeyError, TypeError, ValueError):
            log.warning("ignoring malformed set_k: %r", message)
        return None
    if kind == "status":
        return live.status().frame()
    if kind == "start":
        live.resume()
        return None
    if kind == "stop":
        live.pause()
        return None
    if kind == "load":
        slot = message.get("slot")
        path = message.get("path")
        if slot not in ("A", "B") or not isinstance(path, str):
            log.warning("ignoring malformed load: %r", message)
            return None
        try:
            samples, rate = read_wav(path)
        except (OSError, ValueError) as exc:
            log.warning("load %s failed: %s", path, exc)
            return None
        if rate != live.config.sample_rate:
            log.warning(
                "load %s failed: sample rate %d != engine rate %d",
                path, rate, live.config.sample_rate,
            )
            return None
        live.set_source(slot, samples)
        return None
    log.warning("ignoring control message of unknown kind: %r", message)
    return None


async def serve_control(
    live: LiveEngine,
    host: str,
    port: int,
    ready: asyncio.Event | None = None,
    bound: list | None = None,
):
    """Run the WebSocket control server until cancelled.

    Every client receives the status stream at <= 10 Hz; control messages
    are one JSON object per text frame.
    """
    import websockets

    clients: set = set()

    async def handler(ws):
        clients.add(ws)
        try:
            async for raw in ws:
                reply = handle_message(live, raw)
                if reply is not None:
                    await ws.send(json.dumps(reply))
        except websockets.ConnectionClosed:
            pass
        finally:
            clients.discard(ws)

    async def broadcast():
        while True:
            await asyncio.sleep(STATUS_INTERVAL)
            if not clients:
                continue
            frame = json.dumps(live.status().frame())
            await asyncio.gather(
                *(ws.send(frame) for ws in list(clients)), return_exceptions=True
            )

    async with websockets.serve(handler, host, port) as server:
        if bound is not None:
            bound.append(server.sockets[0].getsockname()[1])
        if ready is not None:
            ready.set()
        await broadcast()
