"""Wire protocol: framing, round-trips, and the rejection paths."""

import json

import crowdkiosk.protocol as wire

# one JSON object per frame, protocol_version on every message
cmd = wire.LeaderCommand(seq=17, joints=(0.0, -1.1, 1.3, 0.0, 0.9, 0.0, 0.7) * 2)
frame = wire.encode(cmd)
print("encoded LeaderCommand:")
print(" ", frame.decode()[:96], "...")

decoded = wire.decode(frame)
assert decoded == cmd
print("round-trip identity holds; re-encode is byte-identical:", wire.encode(decoded) == frame)

# malformed frames raise with a code the service can surface
try:
    wire.decode(json.dumps({"protocol_version": 1, "type": "LeaderCommand", "seq": 1, "joints": [0] * 13}).encode())
except wire.ProtocolError as exc:
    print(f"13 joints -> {exc.code}: {exc.message}")

try:
    wire.decode(json.dumps({"protocol_version": 99, "type": "StopEpisode"}).encode())
except wire.ProtocolError as exc:
    print(f"version 99 -> {exc.code}")

# unknown message types decode to an Error value instead of raising
msg = wire.decode(json.dumps({"protocol_version": 1, "type": "SelfDestruct"}).encode())
print(f"unknown type -> {type(msg).__name__} code={msg.code}")

# the interop vector file pins the canonical encodings other clients test against
with open("docs/wire_test_vectors.jsonl", "rb") as fh:
    vectors = fh.read().splitlines()
kinds = {type(wire.decode(line)).__name__ for line in vectors}
print(f"{len(vectors)} interop vectors covering {len(kinds)} message types")
