"""Run the oracle checks and the acceptance suite, printing one line each."""

import sys
from pathlib import Path

from l1dist import verify

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
import test_acceptance  # noqa: E402


def main():
    for r in verify.run_all():
        print(r.line())
    ok = True
    for crit in test_acceptance.CRITERIA:
        passed, line = crit()
        ok &= passed
        print(line, flush=True)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
