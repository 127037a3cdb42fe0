"""Case files, the built-in corpus, the verification pipeline and the CLI."""
from .cases import KINDS, SCHEMA, CaseFile, Report
from .corpus import builtin_corpus, corpus_by_id
from .pipeline import run_case, verify_extension_case

__all__ = ["KINDS", "SCHEMA", "CaseFile", "Report", "builtin_corpus", "corpus_by_id", "run_case",
           "verify_extension_case"]
