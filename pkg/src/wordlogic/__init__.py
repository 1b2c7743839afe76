"""Executable one-block existential logic on finite words with uniform
numerical predicates: sets, words, sentences, recognisers, equation checks,
rewrite witnesses and generalized words."""

from .equations import AppendEq, CheckReport, DupEq, SwapEq, check_all, check_family, search_colouring
from .formulas import PredRegistry, evaluate, normal_form, parse, parse_qf, sentence_to_generators
from .pseudofinite import ClosedExpr, GeneralizedWord1, Hat, Infeasible, Star
from .recognisers import Recogniser1, compile_sentence, equivalent, from_generator, synthesize
from .rewrite import RewriteChain, verify_chain, witness_chain
from .upsets import Colouring1, UPSet, WindowColouringK, refine
from .words import Alphabet, content, content_on, profile

__version__ = "0.1.0"
