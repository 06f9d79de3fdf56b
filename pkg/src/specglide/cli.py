"""Command-line interface: offline rendering, analysis reports, live mode.

Exit codes: 0 success, 2 bad arguments, 3 I/O failure (unreadable or
incompatible files, busy port, missing audio device), 4 engine fault.
"""
from __future__ import annotations

import argparse
import asyncio
import csv
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .audio_io import read_wav, to_mono, write_wav
from .engine import EngineFault, InterpolationEnvelope, render
from .live import LiveEngine, serve_control
from .reassign import DEFAULT_MIN_REGION_FRACTION, reassign, segment
from .stft import (
    AnalysisConfig,
    DEFAULT_FFT_LENGTH,
    DEFAULT_WINDOW_LENGTH,
    Frame,
    analyze,
    make_derivative_window,
    make_hann_window,
)

log = logging.getLogger("specglide")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_ENGINE = 4


class InputError(Exception):
    """Unreadable or mutually incompatible input data (exit 3)."""


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specglide",
        description=(
            "Glide the pitches of one audio stream into the pitches of another: "
            "per analysis window the two short-time spectra are matched by a 1-D "
            "optimal transport plan and every matched mass slides between its two "
            "frequencies under one interpolation parameter k."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_analysis_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--window", type=int, default=DEFAULT_WINDOW_LENGTH,
                       help="analysis window length in samples (default %(default)s)")
        p.add_argument("--fft", type=int, default=DEFAULT_FFT_LENGTH,
                       help="FFT length in samples (default %(default)s)")
        p.add_argument("--min-region-mass", type=float,
                       default=DEFAULT_MIN_REGION_FRACTION,
                       help="merge spectral regions below this fraction of the total "
                            "magnitude (default %(default)s)")

    p_render = sub.add_parser("render", help="offline render of a morph between two files")
    p_render.add_argument("--a", required=True, help="input WAV for k=0")
    p_render.add_argument("--b", required=True, help="input WAV for k=1")
    p_render.add_argument("--out", required=True, help="output WAV path")
    group = p_render.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=_unit_interval,
                       help="constant interpolation parameter in [0, 1]")
    group.add_argument("--curve", help="envelope file of `time_seconds,k` lines")
    p_render.add_argument("--encoding", choices=("float32", "pcm16"), default="float32")
    add_analysis_flags(p_render)

    p_analyze = sub.add_parser("analyze", help="per-hop spectral-region report (CSV + figures)")
    p_analyze.add_argument("--in", dest="infile", required=True, help="input WAV")
    p_analyze.add_argument("--out", required=True, help="output CSV path")
    p_analyze.add_argument("--plot", help="figure path (default: CSV path with .png suffix)")
    p_analyze.add_argument("--no-plot", action="store_true", help="skip the figures")
    add_analysis_flags(p_analyze)

    p_live = sub.add_parser("live", help="real-time engine steered over a WebSocket")
    p_live.add_argument("--a", required=True, help="looped source WAV for k=0")
    p_live.add_argument("--b", required=True, help="looped source WAV for k=1")
    p_live.add_argument("--listen", default="127.0.0.1:8765", help="control address host:port")
    p_live.add_argument("--audio-out", help="output device name (requires sounddevice)")
    p_live.add_argument("--capture", help="write the rendered output to this WAV on exit")
    p_live.add_argument("--duration", type=float,
                        help="stop after this many seconds (default: run until interrupted)")
    add_analysis_flags(p_live)
    return parser


def _load_pair(path_a: str, path_b: str) -> tuple[np.ndarray, np.ndarray, int]:
    try:
        a, rate_a = read_wav(path_a)
        b, rate_b = read_wav(path_b)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if rate_a != rate_b:
        raise InputError(
            f"sample rates differ ({path_a}: {rate_a} Hz, {path_b}: {rate_b} Hz); "
            "resample one input first"
        )
    return a, b, rate_a


def _config(args: argparse.Namespace, sample_rate: int) -> AnalysisConfig:
    return AnalysisConfig(
        sample_rate=sample_rate, window_length=args.window, fft_length=args.fft
    )


def cmd_render(args: argparse.Namespace) -> int:
    a, b, rate = _load_pair(args.a, args.b)
    if args.k is not None:
        envelope = InterpolationEnvelope.constant(args.k)
    else:
        try:
            envelope = InterpolationEnvelope.from_file(args.curve)
        except (OSError, ValueError) as exc:
            raise InputError(f"envelope {args.curve}: {exc}") from exc
    config = _config(args, rate)
    output = render(a, b, envelope, config, args.min_region_mass)
    try:
        write_wav(args.out, output, rate, args.encoding)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    log.info("wrote %s (%d samples at %d Hz)", args.out, len(output), rate)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        samples, rate = read_wav(args.infile)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    mono = to_mono(samples)
    config = _config(args, rate)
    window = make_hann_window(config.window_length)
    dwindow = make_derivative_window(config.window_length, config.sample_rate)
    hop, length = config.hop_length, config.window_length
    n_frames = (len(mono) - length) // hop + 1
    if n_frames < 1:
        raise InputError(
            f"{args.infile}: need at least one full window ({length} samples), "
            f"got {len(mono)}"
        )

    rows = []
    loudest = (0, -1.0)  # (hop index, total mass)
    for t in range(n_frames):
        frame = Frame(samples=mono[t * hop : t * hop + length], start_time=t * hop)
        reassigned = reassign(
            analyze(frame, window, config), analyze(frame, dwindow, config)
        )
        regions = segment(reassigned, args.min_region_mass)
        center_time = (t * hop + length / 2.0) / rate
        total = sum(r.mass for r in regions)
        if total > loudest[1]:
            loudest = (t, total)
        for i, region in enumerate(regions):
            rows.append((t, center_time, i, region))

    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["hop", "time_seconds", "region_index", "start_bin", "end_bin",
                 "center_bin", "center_freq_hz", "mass"]
            )
            for t, center_time, i, r in rows:
                writer.writerow(
                    [t, f"{center_time:.6f}", i, r.start_bin, r.end_bin,
                     r.center_bin, f"{r.center_freq:.6f}", f"{r.mass:.9g}"]
                )
    except OSError as exc:
        raise InputError(str(exc)) from exc
    log.info("wrote %s (%d region rows over %d hops)", args.out, len(rows), n_frames)

    if not args.no_plot:
        from . import plotting

        base = Path(args.plot) if args.plot else Path(args.out).with_suffix(".png")
        plotting.save_region_tracks(rows, str(base), title=Path(args.infile).name)
        t = loudest[0]
        frame = Frame(samples=mono[t * hop : t * hop + length], start_time=t * hop)
        reassigned = reassign(
            analyze(frame, window, config), analyze(frame, dwindow, config)
        )
        regions = segment(reassigned, args.min_region_mass)
        seg_path = base.with_name(base.stem + "_segmentation" + base.suffix)
        plotting.save_segmentation_view(reassigned, regions, str(seg_path))
        log.info("wrote %s and %s", base, seg_path)
    return EXIT_OK


def cmd_live(args: argparse.Namespace) -> int:
    a, b, rate = _load_pair(args.a, args.b)
    config = _config(args, rate)

    captured: list[np.ndarray] = []
    sink = None
    stream = None
    if args.audio_out is not None:
        try:
            import sounddevice as sd
        except ImportError as exc:
            raise InputError(
                "--audio-out requires the sounddevice package (pip install "
                "specglide[audio])"
            ) from exc
        try:
            stream = sd.OutputStream(
                samplerate=rate, channels=1, device=args.audio_out,
                blocksize=config.hop_length,
            )
            stream.start()
        except Exception as exc:  # device errors are backend-specific
            raise InputError(f"cannot open audio device {args.audio_out}: {exc}") from exc

    def make_sink():
        def push(hop: np.ndarray) -> None:
            if stream is not None:
                stream.write(hop.astype(np.float32))
            if args.capture:
                captured.append(hop.copy())
        return push

    if stream is not None or args.capture:
        sink = make_sink()

    live = LiveEngine(
        a, b, config, args.min_region_mass, sink=sink,
        realtime=stream is None,  # an open device paces the loop by itself
    )
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise InputError(f"--listen must be host:port, got {args.listen!r}")

    async def run() -> None:
        live.start()
        server = asyncio.create_task(serve_control(live, host, int(port_text)))
        log.info("live engine listening on ws://%s:%s", host, port_text)
        if args.duration is not None:
            timer = asyncio.create_task(asyncio.sleep(args.duration))
        else:
            timer = asyncio.create_task(asyncio.Event().wait())
        done, pending = await asyncio.wait(
            {server, timer}, return_when=asyncio.FIRST_COMPLETED
        )
        for task in pending:
            task.cancel()
        for task in done:
            task.result()  # surface server failures such as a busy port

    try:
        asyncio.run(run())
    except KeyboardInterrupt:
        pass
    except OSError as exc:
        raise InputError(f"cannot listen on {args.listen}: {exc}") from exc
    finally:
        live.shutdown()
        if stream is not None:
            stream.stop()
            stream.close()
        if args.capture and captured:
            write_wav(args.capture, np.concatenate(captured), rate)
            log.info("captured %d hops to %s", len(captured), args.capture)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("AT_LOG", "INFO").upper())
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"render": cmd_render, "analyze": cmd_analyze, "live": cmd_live}
    try:
        return handlers[args.command](args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except EngineFault as exc:
        log.error("engine fault: %s", exc)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
