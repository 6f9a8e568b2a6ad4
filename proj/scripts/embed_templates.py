#!/usr/bin/env python3
"""Regenerates include/lcforge/default_templates.hpp from templates/*.txt."""
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent
out = root / "include" / "lcforge" / "default_templates.hpp"
delim = "lcft"

lines = [
    "// Generated by scripts/embed_templates.py from templates/*.txt. Do not edit.",
    "#pragma once",
    "",
    "#include <array>",
    "#include <string_view>",
    "#include <utility>",
    "",
    "namespace lcforge::detail {",
    "",
]
files = sorted((root / "templates").glob("*.txt"))
lines.append(f"inline constexpr std::array<std::pair<std::string_view, std::string_view>, {len(files)}> kDefaultTemplates = {{{{")
for f in files:
    body = f.read_text(encoding="utf-8")
    assert f"){delim}\"" not in body
    lines.append(f'    {{"{f.stem}", R"{delim}({body}){delim}"}},')
lines.append("}};")
lines.append("")
lines.append("}  // namespace lcforge::detail")
out.write_text("\n".join(lines) + "\n", encoding="utf-8")
print(f"wrote {out} ({len(files)} templates)")
