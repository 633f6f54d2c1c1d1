"""Builds the bundled word lists in crates/core/data.

Inputs come from the TextBlob wheel (PDDL / public-domain resources):
  en-spelling.txt   word frequency counts
  en-sentiment.xml  adjective polarity lexicon, polarity in [-1, 1]

usage: python3 build_lexicons.py <textblob/en dir> <out dir>
"""

import hashlib
import sys
import xml.etree.ElementTree as ET
from collections import defaultdict
from pathlib import Path

EASY_WORDS = 3000

STOPWORDS = """
a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during
each few for from further had has have having he her here hers herself him
himself his how i if in into is it its itself just let me more most my myself
no nor not now of off on once only or other ought our ours ourselves out over
own same shall she should so some such than that the their theirs them
themselves then there these they this those through to too under until up
upon us very was we were what when where which while who whom whose why will
with would you your yours yourself yourselves also although among around away
else ever every however may might must much neither either onto per rather
since still though thus toward towards unless via whether within without yet
""".split() + ["'s", "'m", "'re", "'ve", "'ll", "'d", "n't"]

NEGATORS_ARE_NOT_LEXICON = {"not", "no", "never", "n't"}


def write_list(path, lines, title):
    body = "".join(line + "\n" for line in lines)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    path.write_text(f"# sha256 {digest}\n# {title}\n" + body, encoding="utf-8")


def easy_words(spelling):
    counts = []
    for line in spelling.read_text(encoding="utf-8").splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        word, count = line.split()
        if not word.isalpha() or not word.isascii():
            continue
        if len(word) == 1 and word not in ("a", "i"):
            continue
        counts.append((-int(count), word))
    counts.sort()
    return sorted(w for _, w in counts[:EASY_WORDS])


def valence(xml_path):
    senses = defaultdict(list)
    for node in ET.parse(xml_path).getroot().iter("word"):
        form = node.get("form", "").lower()
        if " " in form or not form:
            continue
        senses[form].append(float(node.get("polarity", "0")))
    out = []
    for form in sorted(senses):
        if form in NEGATORS_ARE_NOT_LEXICON:
            continue
        value = round(4.0 * sum(senses[form]) / len(senses[form]), 3)
        if value != 0.0:
            out.append(f"{form}\t{value}")
    return out


def main():
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    stop = sorted(set(STOPWORDS))
    write_list(dst / "stopwords.txt", stop, "stopwords, one per line")
    write_list(dst / "easy_words.txt", easy_words(src / "en-spelling.txt"),
               f"{EASY_WORDS} most frequent words, one per line")
    write_list(dst / "valence.txt", valence(src / "en-sentiment.xml"),
               "word<TAB>valence in [-4, 4]")
    print(len(stop), "stopwords")


if __name__ == "__main__":
    main()
