from .data import (DistributionSpec, PixelRegion, SpectralBand, NoiseSchedule, DenoiserConfig, Denoiser,
                   NoisedClassifier, GuidanceConfig, AutophagyConfig, GenerationRecord, REAL, GENERATED,
                   DISTRIBUTION_FAMILIES)
from .distributions import (sample, sample_with_stats, sample_labeled, DensityOracle, oracle_for, enumerate_bernoulli,
                            exact_divergences, divergences_from_probabilities, bayes_accuracy,
                            monte_carlo_divergences, parse_distribution)
from .diffusion import (timestep_embedding, network_input, forward_diffuse, build_denoiser, predict_noise,
                        noise_prediction_loss, noise_prediction_loss_and_grad, train_denoiser, guidance_gradient,
                        ancestral_sample, train_noised_classifier)
from .autophagy import GaussianFitGenerator, autophagy_loop, frechet_to_reference, default_probe
