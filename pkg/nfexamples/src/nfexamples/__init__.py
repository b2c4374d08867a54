"""Number-field example verifier.

Drives an external GP/PARI engine over generated scripts to check, for two
built-in field towers, that class numbers are coprime to the tower prime and
that every ramified place satisfies the tame solvability property.  The
engine is the only source of number-field facts; this package generates the
scripts, parses the transcripts, delegates the per-place property checks to
the `towerforge` command line, and renders verdicts in the shared
`towerforge-report/1` JSON contract.
"""

from nfexamples.examples import BUILTIN_EXAMPLES, ExampleSpec

__all__ = ["BUILTIN_EXAMPLES", "ExampleSpec"]
