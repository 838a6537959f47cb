"""Writes the spell-check word list used by the service crate.

Words come from the `wordfreq` package (data under CC BY-SA 4.0). Each line
is `word<TAB>frequency`, where frequency is the Zipf value times 100.
"""

import re
import sys

from wordfreq import top_n_list, zipf_frequency

N = 20000


def main(out_path: str) -> None:
    words = [w for w in top_n_list("en", N * 2) if re.fullmatch(r"[a-z]+", w)][:N]
    with open(out_path, "w", encoding="utf-8") as out:
        out.write("# English word list from wordfreq (CC BY-SA 4.0); word<TAB>zipf*100\n")
        for w in words:
            out.write(f"{w}\t{round(zipf_frequency(w, 'en') * 100)}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/service/resources/dictionary.tsv")
