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

"""Repository hygiene checks: license, file headers, README, CI and build settings."""

import pathlib
import re
import sys

SOURCE_DIRS = ("core", "tools", "tests", "benchmarks", "scripts")
CPP_SUFFIXES = {".cpp", ".hpp", ".h"}
README_SECTIONS = ("Build", "Usage", "HTTP API", "Configuration", "Testing", "Benchmarks", "License")


def header_lines(root: pathlib.Path) -> list[str]:
    return (root / "scripts" / "license_header.txt").read_text().splitlines()


def has_header(path: pathlib.Path, expected: list[str]) -> bool:
    lines = path.read_text(encoding="utf-8").splitlines()
    if path.suffix == ".py":
        if lines and lines[0].startswith("#!"):
            lines = lines[1:]
        expected = ["#" + line[2:] for line in expected]
    return lines[: len(expected)] == expected


def main() -> int:
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else ".").resolve()
    problems = []

    license_file = root / "LICENSE"
    if not license_file.is_file() or "Apache License" not in license_file.read_text():
        problems.append("LICENSE is missing or not Apache-2.0")

    expected = header_lines(root)
    checked = 0
    for directory in SOURCE_DIRS:
        for path in sorted((root / directory).rglob("*")):
            if path.suffix in CPP_SUFFIXES or path.suffix == ".py":
                checked += 1
                if not has_header(path, expected):
                    problems.append(f"{path.relative_to(root)}: missing license header")

    readme = root / "README.md"
    if not readme.is_file():
        problems.append("README.md is missing")
    else:
        headings = set(re.findall(r"^#+\s+(.+?)\s*$", readme.read_text(), re.MULTILINE))
        for section in README_SECTIONS:
            if section not in headings:
                problems.append(f"README.md has no '{section}' section")

    workflows = list((root / ".github" / "workflows").glob("*.yml"))
    if not any("ctest" in w.read_text() for w in workflows):
        problems.append("no CI workflow running ctest")

    top = (root / "CMakeLists.txt").read_text()
    if not re.search(r"set\(CMAKE_CXX_STANDARD 20\)", top):
        problems.append("CMakeLists.txt does not require C++20")
    core = (root / "core" / "CMakeLists.txt").read_text()
    if "install(EXPORT" not in core or not (root / "core" / "cmake" / "metalakeConfig.cmake.in").is_file():
        problems.append("core does not install a CMake package config")

    for p in problems:
        print(p)
    print(f"{checked} source files checked, {len(problems)} problems")
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
