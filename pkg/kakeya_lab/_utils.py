import ast
from dataclasses import dataclass
import operator as op


# supported operators
operators = {
    ast.Add: op.add,
    ast.Sub: op.sub,
    ast.Mult: op.mul,
    ast.Div: op.truediv,
    ast.FloorDiv: op.floordiv,
    ast.Mod: op.mod,
    ast.Pow: op.pow,
    ast.USub: op.neg,
}


def eval_expr(expr):
    """Safely evaluate an arithmetic expression such as a cap value.

    >>> eval_expr('2*6')
    12
    >>> eval_expr('10**7')
    10000000
    >>> eval_expr('1 + 2*3**(4) / (6 + -7)')
    -161.0
    """
    return eval_(ast.parse(expr, mode="eval").body)


def eval_(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    elif isinstance(node, ast.BinOp):
        return operators[type(node.op)](eval_(node.left), eval_(node.right))
    elif isinstance(node, ast.UnaryOp):
        return operators[type(node.op)](eval_(node.operand))
    else:
        raise TypeError(node)


def parse_count(text):
    """Parse a non-negative integer given as a literal or an expression."""
    value = eval_expr(str(text))
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError("expected an integer, got %r" % text)
        value = int(value)
    if value < 0:
        raise ValueError("expected a non-negative integer, got %r" % text)
    return value


@dataclass(frozen=True)
class _Sentinel:
    """A sentinel to mark a parameter as not explicitly set"""
    default_value: object

    def __repr__(self):
        return f"default({self.default_value!r})"
