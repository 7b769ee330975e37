"""
Bit and symbol helpers. Bits are ordered most significant first throughout the package.
"""
import numpy as np


def popcount(value):
    """Counts the set bits of a non-negative integer

    :param value: integer
    :type value: int
    :return: number of ones
    :rtype: int
    """
    return bin(value).count('1')


def int_to_bits(value, width):
    """Converts an integer to a bit array, most significant bit first

    :param value: integer
    :type value: int
    :param width: number of bits
    :type width: int
    :return: bits
    :rtype: numpy.ndarray[numpy.uint8]
    """
    shifts = np.arange(width - 1, -1, -1)
    return ((value >> shifts) & 1).astype(np.uint8)


def bits_to_int(bits):
    """Converts a bit array (most significant bit first) to an integer

    :param bits: bits
    :type bits: array_like
    :return: integer
    :rtype: int
    """
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def symbols_to_bits(symbols, width):
    """Expands an array of integer symbols to bits, most significant bit of each symbol first

    :param symbols: integer symbols
    :type symbols: numpy.ndarray
    :param width: bits per symbol
    :type width: int
    :return: flat bit array
    :rtype: numpy.ndarray[numpy.uint8]
    """
    shifts = np.arange(width - 1, -1, -1)
    return ((np.asarray(symbols)[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)


def bits_to_symbols(bits, width):
    """Packs a flat bit array into integer symbols of the given width, most significant bit first

    :param bits: flat bit array with length divisible by width
    :type bits: numpy.ndarray
    :param width: bits per symbol
    :type width: int
    :return: integer symbols
    :rtype: numpy.ndarray[numpy.int64]
    """
    bits = np.asarray(bits, dtype=np.int64).reshape(-1, width)
    weights = 1 << np.arange(width - 1, -1, -1)
    return bits @ weights
