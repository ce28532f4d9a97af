from .data import (ModelSpec, Normalizer, Parameters, TrainConfig, DivergenceEstimate, ProbeReport, ClassDataset,
                   MODEL_FAMILIES, NORMALIZATION_MODES)
from .networks import init_params, forward, forward_cached, backward, input_gradient, extract_features
from .losses import (cross_entropy_loss, per_sample_cross_entropy, smoothed_targets, loss_and_grad, grad,
                     binary_two_term_loss)
from .divergence import tv_lower_bound, jsd_estimate, estimate_divergences
from .training import train, evaluate, predict_logits, SgdMomentum, stack_classes, heldout_view
from .checkpoint import save_checkpoint, load_checkpoint
