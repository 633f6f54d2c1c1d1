"""Collect English prose sentences from Python docstrings installed locally.

Output: one sentence per line on stdout. Used to build the silver-tagged
corpus the bundled POS tagger is trained on.
"""
import ast
import hashlib
import os
import re
import sys

ROOTS = sys.argv[1:] or ["/usr/lib/python3.10"]
SPLIT = re.compile(r"(?<=[.!?])\s+(?=[A-Z\"'])")
BAD = re.compile(r"[=_<>{}\[\]|\\/`*~^]|\.\.\.|::|\d{3,}|http|www|e\.g|i\.e|\bvs\b")
WORD = re.compile(r"[A-Za-z][A-Za-z'\-]*")


def docstrings(path):
    try:
        tree = ast.parse(open(path, encoding="utf-8", errors="ignore").read())
    except Exception:
        return
    for node in ast.walk(tree):
        if isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef)):
            doc = ast.get_docstring(node)
            if doc:
                yield doc


def sentences(doc):
    for para in re.split(r"\n\s*\n", doc):
        lines = [l.strip() for l in para.splitlines()]
        if any(l.startswith((">>>", "-", "*", "..", ":", "Parameters", "Returns")) for l in lines):
            continue
        text = " ".join(lines)
        for s in SPLIT.split(text):
            s = s.strip()
            toks = s.split()
            if not (6 <= len(toks) <= 40):
                continue
            if not s[0].isupper() or s[-1] not in ".!?":
                continue
            if BAD.search(s):
                continue
            words = WORD.findall(s)
            if len(words) < 0.85 * len(toks):
                continue
            if sum(1 for w in words if w[0].isupper()) > 0.4 * len(words):
                continue
            yield s


seen = set()
for root in ROOTS:
    for dirpath, _, files in os.walk(root):
        if "/tests" in dirpath or "/test" in dirpath:
            continue
        for f in sorted(files):
            if not f.endswith(".py"):
                continue
            for doc in docstrings(os.path.join(dirpath, f)):
                for s in sentences(doc):
                    h = hashlib.md5(s.encode()).digest()
                    if h not in seen:
                        seen.add(h)
                        print(s)
