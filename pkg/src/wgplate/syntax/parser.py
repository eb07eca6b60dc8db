import ast
from pkgutil import get_data

from lark import Lark, Transformer


def parse(text):
    # the public parsing interface for study configurations
    # return a list of (key, values, line) entries in file order
    # check study.lark for details
    grammar = get_data(__name__, "study.lark").decode("utf-8")
    return Lark(grammar, parser="lalr", transformer=_PostParsing()).parse(text)


def to_mapping(entries):
    # {key: (value, line)}; a single atom is unwrapped, the first duplicate wins
    # and later ones are reported by the caller
    mapping = {}
    duplicates = []
    for key, values, line in entries:
        value = values[0] if len(values) == 1 else values
        if key in mapping:
            duplicates.append((key, value, line))
        else:
            mapping[key] = (value, line)
    return mapping, duplicates


################################################################
#                           Private
################################################################


class _PostParsing(Transformer):
    def start(self, args):
        return args

    def entry(self, args):
        key = args[0]
        return key.value, [_literal(atom.value) for atom in args[1:]], key.line


def _literal(text):
    # numbers become int/float, anything else stays a bare word
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return text
    return value
