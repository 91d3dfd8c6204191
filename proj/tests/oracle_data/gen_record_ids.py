#!/usr/bin/env python3
# Copyright 2026 The metalake Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates record_ids.json from the python xxhash package."""
import base64
import json
import random
import xxhash

SEP = "\x1f"


def record_id(source: str, ident: str) -> str:
    digest = xxhash.xxh64((source + SEP + ident).encode("utf-8"), seed=0).digest()
    return base64.urlsafe_b64encode(digest).decode("ascii").rstrip("=")


def main() -> None:
    rng = random.Random(20240501)
    cases = [
        ("", "x"),
        ("https://a.example/oai", "oai:a:1"),
        ("https://b.example/oai", "oai:a:1"),
        ("https://zenodo.org/oai2d", "oai:zenodo.org:15340197"),
        ("s3://bucket", "dir/file.xml"),
        ("https://ex.org/ümlaut", "id-é-ß-中文"),
    ]
    alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789:/._-éü中"
    for n in range(0, 70):
        src = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, n)))
        ident = "".join(rng.choice(alphabet) for _ in range(max(1, n)))
        cases.append((src, ident))
    digests = []
    for n in [0, 1, 3, 4, 7, 8, 15, 16, 31, 32, 33, 63, 64, 100, 1000]:
        data = bytes(rng.randrange(256) for _ in range(n))
        digests.append({"hex": data.hex(), "xxh64": xxhash.xxh64(data, seed=0).intdigest(),
                        "xxh64_seed7": xxhash.xxh64(data, seed=7).intdigest()})
    out = {
        "ids": [{"source": s, "originalIdentifier": i, "recordId": record_id(s, i)} for s, i in cases],
        "digests": digests,
    }
    with open("record_ids.json", "w", encoding="utf-8") as f:
        json.dump(out, f, ensure_ascii=False, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
