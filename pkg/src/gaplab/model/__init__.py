"""Numpy encoder-decoder model: parameters, forward/backward, decoding, Adam."""

from .adam import AdamState, NonFiniteGradient, apply_update, global_norm
from .checkpoint import (Checkpoint, checkpoint_hash, load_checkpoint,
                         save_checkpoint, state_hash)
from .decode import DecodeSpec, beam_translate, greedy_translate, translate
from .gradcheck import GradCheckReport, check_gradients
from .network import (LossResult, SequenceTooLong, decode_logits, encode_batch,
                      pack_source, pack_target, seq2seq_loss)
from .params import Dims, ModelParams, init_model, param_count, param_names

__all__ = [
    "AdamState", "NonFiniteGradient", "apply_update", "global_norm",
    "Checkpoint", "checkpoint_hash", "load_checkpoint", "save_checkpoint",
    "state_hash", "DecodeSpec", "beam_translate", "greedy_translate",
    "translate", "GradCheckReport", "check_gradients", "LossResult",
    "SequenceTooLong", "decode_logits", "encode_batch", "pack_source",
    "pack_target", "seq2seq_loss", "Dims", "ModelParams", "init_model",
    "param_count", "param_names",
]
