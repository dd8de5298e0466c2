#!/usr/bin/env python3
"""Serve a local OpenAI-style chat-completions endpoint with canned poems.

Useful for exercising `poemetrics generate` without network access or an
API key:

    python scripts/mock_chat_server.py --port 8080 &
    OPENAI_API_KEY=dummy poemetrics generate --model gpt-4 \
        --endpoint http://127.0.0.1:8080/v1/chat/completions \
        --styles sonnet haiku --subjects love nature --out mock.jsonl

Responses are deterministic per prompt (seeded by a hash of the prompt) and
assembled from a small stock of lines so the output parses, rhymes
occasionally, and scans.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

STOCK_LINES = [
    "Upon the hill the morning light",
    "A whisper moves along the stream",
    "We gather where the shadows play",
    "The golden leaves begin to fall",
    "An echo calls across the night",
    "Beneath the stars we learn to dream",
    "The river bends and slips away",
    "A distant bell begins to call",
]


def poem_for(prompt: str) -> str:
    rng = random.Random(hashlib.sha256(prompt.encode()).digest())
    lines = [rng.choice(STOCK_LINES) for _ in range(rng.choice([4, 8, 12]))]
    stanzas = [lines[i:i + 4] for i in range(0, len(lines), 4)]
    return "\n\n".join("\n".join(s) for s in stanzas)


class Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        payload = json.loads(self.rfile.read(length))
        prompt = payload["messages"][0]["content"]
        body = json.dumps(
            {"choices": [{"message": {"content": poem_for(prompt)}}]}
        ).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):
        print(f"{self.address_string()} {fmt % args}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    args = parser.parse_args()
    server = ThreadingHTTPServer((args.host, args.port), Handler)
    print(f"serving mock chat completions on http://{args.host}:{args.port}/v1/chat/completions")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass


if __name__ == "__main__":
    main()
