import pytest

from legendregap import sieve_primes


@pytest.fixture(scope="session")
def t1k():
    return sieve_primes(1_000)


@pytest.fixture(scope="session")
def t20k():
    return sieve_primes(20_000)
