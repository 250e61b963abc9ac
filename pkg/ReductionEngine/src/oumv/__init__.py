"""OuMv instances, the brute-force oracle and instance generators."""

from .instance import (BitMatrix, BitVector, OuMvInstance, augment_instance,
                       next_power_of_two, pad_instance, pad_to_power_of_two,
                       transpose, vmv)
from .generators import INSTANCE_MODES, InstanceGenerator, all_small_queries, generate_instance
from .text_format import format_instance, parse_instance, read_instance, write_instance

__all__ = [
    "BitMatrix", "BitVector", "OuMvInstance", "augment_instance", "next_power_of_two",
    "pad_instance", "pad_to_power_of_two", "transpose", "vmv",
    "INSTANCE_MODES", "InstanceGenerator", "all_small_queries", "generate_instance",
    "format_instance", "parse_instance", "read_instance", "write_instance",
]
