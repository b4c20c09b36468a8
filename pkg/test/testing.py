"""
This file is for code testing
"""

from loopforge import baer_envelope, lemma_suite, read_folder, read_loop
from loopforge.bx2p import classify_folder, sieve_q
from loopforge.report import reports_to_frame
from loopforge.search import EnumSpec, enumerate_loops, enumeration_frame
from loopforge.verbalizer import Verbalizer, verbalize_flags

config = {
    "evensize": 1,
    "noHinvert": 1,
    "O2prime": 1,
    "subloops": 1,
    "HeissEquation": 1,
    "theorem1": 1,
    }

example_loops = [
    "corpus:c4.loop",
    "corpus:s3.loop",
    "corpus:nonassoc5.loop",
    "corpus:v8.loop",
]

def main():
    # Baer envelopes of the example loops
    for source in example_loops:
        F = baer_envelope(read_loop(source))
        print(f"{source}: |G| = {F.G.order}, |H| = {F.H.order}")

    # Classify a folder and verbalize the flags
    F = read_folder("corpus:bol8.folder")
    for line in verbalize_flags(classify_folder(F)):
        print(f"  - {line}")

    # Run a few lemma audits
    reports = lemma_suite(F, config=config)
    print(Verbalizer(reports_to_frame(reports)).verbalize())

    # Field sizes admitted by the hypothesis
    print([c.q for c in sieve_q(70000) if c.admitted])

    # Loops of order 5 up to isomorphism
    print(enumeration_frame(enumerate_loops(EnumSpec(5), workers=2)))


if __name__ == "__main__":
    main()
