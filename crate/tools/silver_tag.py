"""Silver-tag pre-tokenized sentences with the Brill rule tagger bundled in
TextBlob (Penn Treebank tagset) and emit token<TAB>tag lines.

stdin: one sentence per line, tokens separated by single spaces.
stdout: pre-tagged TSV, blank line between sentences.
"""
import re
import sys

from textblob.en.taggers import PatternTagger

TAGSET = set(
    "CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ RB RBR RBS RP SYM TO UH "
    "VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB # $ '' `` ( ) , . :".split()
)
PLACEHOLDER = re.compile(r"^@[A-Za-z0-9]+$")
tagger = PatternTagger()
unmapped = {}

for line in sys.stdin:
    toks = line.split()
    if not toks:
        continue
    tagged = tagger.tag(" ".join(toks), tokenize=False)
    if len(tagged) != len(toks):
        continue
    open_quote = True
    out = []
    for (tok, tag) in tagged:
        if PLACEHOLDER.match(tok):
            tag = "NNP"
        elif tok in ('"', "“", "”"):
            tag = "``" if open_quote else "''"
            open_quote = not open_quote
        elif tag in ("-LRB-", "-LCB-", "-LSB-"):
            tag = "("
        elif tag in ("-RRB-", "-RCB-", "-RSB-"):
            tag = ")"
        elif tag not in TAGSET:
            unmapped[tag] = unmapped.get(tag, 0) + 1
            tag = "SYM" if not any(c.isalnum() for c in tok) else "NN"
        out.append(f"{tok}\t{tag}")
    sys.stdout.write("\n".join(out) + "\n\n")

if unmapped:
    print(f"unmapped tags: {unmapped}", file=sys.stderr)
