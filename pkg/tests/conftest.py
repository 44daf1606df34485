import pytest

from cnlkit.session import default_grammar, default_lexicon, default_scales


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for status, name in REPORT:
        terminalreporter.write_line("%s  %s" % (status, name))


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def grammar():
    return default_grammar()


@pytest.fixture(scope="session")
def scales():
    return default_scales()


DISCOUNT_DOC = """\
[9.a] John is a store-member.
[9.b] John is an SBU-employee.
[9.c] John buys a coke.
[9.d] John buys a lobster.
[9.e] Mary is a store-member.
[9.f] Mary is an SBU-employee.
[9.g] Mary buys a salmon.
[9.h] Mary is blacklisted.
[9.i] A coke is a beverage.
[9.j] A lobster is a seafood.
[9.k] A salmon is a seafood.
[9.l] If a customer buys a beverage then the customer gets a discount of 1.50 dollars for the beverage.
[9.m] (except) If a customer is a store-member and buys a beverage then the customer gets a discount of 2.50 dollars for the beverage.
[9.n] If a customer is a store-member and buys a seafood then the customer gets a discount of 7.50 dollars for the seafood.
[9.o] If a customer is an SBU-employee and buys a seafood then the customer gets a discount of 5.00 dollars for the seafood.
[9.p] If a store-member is blacklisted then cancel 9.m, 9.n.
[9.q] (conflict constraint) A customer gets at most one discount for any product.
"""

TWEETY_DOC = """\
Generally, birds fly.
(strict) Every penguin is a bird.
(strict) Penguins do not fly.
Tweety is a bird.
"""


@pytest.fixture(scope="session")
def discount_doc():
    return DISCOUNT_DOC


@pytest.fixture(scope="session")
def tweety_doc():
    return TWEETY_DOC


@pytest.fixture()
def session(lexicon, grammar, scales):
    from cnlkit.session import Session

    return Session(lexicon, grammar, scales)


def fixture_path(name: str) -> str:
    import importlib.resources

    return str(importlib.resources.files("cnlkit") / "data" / "fixtures" / name)


@pytest.fixture(scope="session")
def fixtures():
    return fixture_path
