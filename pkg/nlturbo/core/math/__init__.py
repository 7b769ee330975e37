from .misc import popcount, int_to_bits, bits_to_int, symbols_to_bits, bits_to_symbols
