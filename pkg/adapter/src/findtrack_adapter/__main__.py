"""Entry point: serve the protocol over standard I/O or TCP.

    findtrack-adapter --stub                     # fixed-function models
    findtrack-adapter --segmenter ID --aligner ID [--device cuda]
    findtrack-adapter --stub --tcp 127.0.0.1:9777

The stdio form is what the pipeline's `--backend stdio:<command>` selector
launches. TCP serves one connection at a time; run several adapter
processes for parallel sessions.
"""

from __future__ import annotations

import argparse
import socket
import sys

from .protocol import AdapterConfig, ProtocolServer, serve_stream
from .stub import StubAligner, StubSegmenter


def build_server(config: AdapterConfig) -> ProtocolServer:
    if config.segmenter_id == "stub" and config.aligner_id == "stub":
        return ProtocolServer(StubSegmenter(), StubAligner())
    from . import models

    segmenter = (
        StubSegmenter() if config.segmenter_id == "stub"
        else models.load_segmenter(config.segmenter_id, config.device)
    )
    aligner = (
        StubAligner() if config.aligner_id == "stub"
        else models.load_aligner(config.aligner_id, config.device)
    )
    return ProtocolServer(segmenter, aligner)


def serve_stdio(server: ProtocolServer) -> None:
    serve_stream(server, sys.stdin.buffer, sys.stdout.buffer)


def serve_tcp(server: ProtocolServer, host: str, port: int) -> None:
    with socket.create_server((host, port)) as listener:
        print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
        while True:
            connection, peer = listener.accept()
            print(f"connection from {peer[0]}:{peer[1]}", file=sys.stderr, flush=True)
            with connection:
                reader = connection.makefile("rb")
                writer = connection.makefile("wb")
                try:
                    serve_stream(server, reader, writer)
                except (BrokenPipeError, ConnectionResetError):
                    pass


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="findtrack-adapter", description=__doc__)
    parser.add_argument("--stub", action="store_true",
                        help="serve deterministic fixed-function models")
    parser.add_argument("--segmenter", default=None, help="segmentation model id")
    parser.add_argument("--aligner", default=None, help="vision-text model id")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--tcp", default=None, metavar="HOST:PORT",
                        help="serve over TCP instead of standard I/O")
    args = parser.parse_args(argv)

    if args.stub:
        segmenter_id = aligner_id = "stub"
    else:
        if not args.segmenter or not args.aligner:
            parser.error("either --stub or both --segmenter and --aligner are required")
        segmenter_id, aligner_id = args.segmenter, args.aligner

    config = AdapterConfig(segmenter_id=segmenter_id, aligner_id=aligner_id, device=args.device)
    try:
        server = build_server(config)
    except Exception as e:
        print(f"failed to load models: {e}", file=sys.stderr)
        return 1

    if args.tcp:
        host, _, port = args.tcp.rpartition(":")
        if not port.isdigit():
            parser.error("--tcp needs HOST:PORT")
        serve_tcp(server, host or "127.0.0.1", int(port))
    else:
        serve_stdio(server)
    return 0


if __name__ == "__main__":
    sys.exit(main())
