//! Integrate-and-fire neuron dynamics and the spiking multi-layer perceptron.

mod forward;
mod surrogate;

pub use forward::{if_step, mlp_forward, rate_decode, SimulationTrace};
pub use surrogate::{
    heaviside, normal_cdf, surrogate_sg, surrogate_wsg, surrogate_wsg_from_deltas, SurrogateEval,
};

use crate::error::{Error, Result};
use rand::Rng;

/// Membrane dynamics parameters shared by every neuron in a network.
#[derive(Debug, Clone)]
pub struct NeuronConfig {
    /// Firing threshold, in membrane-potential units.
    pub threshold: f64,
    /// Leak constant in [0, 1]; 1.0 disables leakage (pure integrate-and-fire).
    pub leak: f64,
    /// Number of simulation time steps.
    pub time_steps: usize,
}

impl NeuronConfig {
    pub fn new(threshold: f64, leak: f64, time_steps: usize) -> Result<Self> {
        let cfg = NeuronConfig {
            threshold,
            leak,
            time_steps,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0) {
            return Err(Error::config(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if !(0.0..=1.0).contains(&self.leak) {
            return Err(Error::config(format!(
                "leak must lie in [0, 1], got {}",
                self.leak
            )));
        }
        if self.time_steps == 0 {
            return Err(Error::config("time_steps must be at least 1"));
        }
        Ok(())
    }
}

impl Default for NeuronConfig {
    fn default() -> Self {
        NeuronConfig {
            threshold: 1.0,
            leak: 1.0,
            time_steps: 32,
        }
    }
}

/// Which surrogate stands in for the Heaviside derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateKind {
    /// Gaussian-density surrogate gradient.
    Sg,
    /// Weak (Stein's lemma) surrogate gradient, Monte-Carlo estimated.
    Wsg,
}

#[derive(Debug, Clone)]
pub struct SurrogateConfig {
    pub kind: SurrogateKind,
    /// Width of the Gaussian surrogate.
    pub sigma: f64,
    /// Sample count K for the weak form; ignored for `Sg`.
    pub wsg_samples: usize,
    /// Base seed for weak-form sampling streams.
    pub rng_seed: u64,
}

impl SurrogateConfig {
    pub fn sg(sigma: f64) -> Self {
        SurrogateConfig {
            kind: SurrogateKind::Sg,
            sigma,
            wsg_samples: 8,
            rng_seed: 0,
        }
    }

    pub fn wsg(sigma: f64, samples: usize, rng_seed: u64) -> Self {
        SurrogateConfig {
            kind: SurrogateKind::Wsg,
            sigma,
            wsg_samples: samples,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::config(format!(
                "surrogate sigma must be positive, got {}",
                self.sigma
            )));
        }
        if self.wsg_samples == 0 {
            return Err(Error::config("wsg_samples must be at least 1"));
        }
        Ok(())
    }
}

/// Dense affine layer: `weights` is row-major `[fan_out x fan_in]`.
#[derive(Debug, Clone)]
pub struct LayerParams {
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub fan_in: usize,
    pub fan_out: usize,
}

impl LayerParams {
    pub fn zeros(fan_in: usize, fan_out: usize) -> Self {
        LayerParams {
            weights: vec![0.0; fan_in * fan_out],
            biases: vec![0.0; fan_out],
            fan_in,
            fan_out,
        }
    }

    /// Seeded uniform init in +-sqrt(1/fan_in); biases start at zero.
    pub fn init_uniform<R: Rng>(fan_in: usize, fan_out: usize, rng: &mut R) -> Self {
        let bound = (1.0 / fan_in as f64).sqrt();
        let weights = (0..fan_in * fan_out)
            .map(|_| rng.gen_range(-bound..bound))
            .collect();
        LayerParams {
            weights,
            biases: vec![0.0; fan_out],
            fan_in,
            fan_out,
        }
    }

    pub fn from_parts(weights: Vec<f64>, biases: Vec<f64>, fan_in: usize, fan_out: usize) -> Result<Self> {
        if weights.len() != fan_in * fan_out || biases.len() != fan_out {
            return Err(Error::dim(format!(
                "layer parts do not match shape {}x{}",
                fan_out, fan_in
            )));
        }
        let layer = LayerParams {
            weights,
            biases,
            fan_in,
            fan_out,
        };
        layer.validate()?;
        Ok(layer)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.fan_in * self.fan_out {
            return Err(Error::dim("weight length does not match fan_in * fan_out"));
        }
        if self.biases.len() != self.fan_out {
            return Err(Error::dim("bias length does not match weight row count"));
        }
        if !self.weights.iter().chain(self.biases.iter()).all(|v| v.is_finite()) {
            return Err(Error::numerical("layer parameters contain non-finite entries"));
        }
        Ok(())
    }

    /// Number of scalar parameters (weights + biases).
    pub fn param_count(&self) -> usize {
        self.weights.len() + self.biases.len()
    }

    /// y = W x + b
    pub fn affine(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.fan_in {
            return Err(Error::dim(format!(
                "affine input length {} does not match fan_in {}",
                x.len(),
                self.fan_in
            )));
        }
        let mut out = self.biases.clone();
        for (row, o) in out.iter_mut().enumerate() {
            let w = &self.weights[row * self.fan_in..(row + 1) * self.fan_in];
            let mut acc = 0.0;
            for (wi, xi) in w.iter().zip(x) {
                acc += wi * xi;
            }
            *o += acc;
        }
        Ok(out)
    }
}

/// Spike nonlinearity used by the forward simulation.
///
/// `Binary` is the real network. `Smooth` replaces the Heaviside with the
/// Gaussian CDF of matching width so the simulated map becomes differentiable;
/// it exists so gradient code can be checked against finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpikeMode {
    #[default]
    Binary,
    Smooth,
}

/// Layered integrate-and-fire network with a non-spiking affine readout
/// applied to the last layer's time-averaged firing rates.
#[derive(Debug, Clone)]
pub struct SpikingMlp {
    pub spiking_layers: Vec<LayerParams>,
    pub readout: LayerParams,
    pub neuron: NeuronConfig,
    pub surrogate: SurrogateConfig,
    pub spike_mode: SpikeMode,
}

impl SpikingMlp {
    /// Seeded construction from a width list `[input, hidden..., output]`.
    pub fn init<R: Rng>(
        widths: &[usize],
        neuron: NeuronConfig,
        surrogate: SurrogateConfig,
        rng: &mut R,
    ) -> Result<Self> {
        if widths.len() < 3 {
            return Err(Error::config(
                "need at least [input, hidden, output] widths",
            ));
        }
        neuron.validate()?;
        surrogate.validate()?;
        let mut spiking_layers = Vec::new();
        for w in widths.windows(2).take(widths.len() - 2) {
            spiking_layers.push(LayerParams::init_uniform(w[0], w[1], rng));
        }
        let last_hidden = widths[widths.len() - 2];
        let out = widths[widths.len() - 1];
        let readout = LayerParams::init_uniform(last_hidden, out, rng);
        let net = SpikingMlp {
            spiking_layers,
            readout,
            neuron,
            surrogate,
            spike_mode: SpikeMode::Binary,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn validate(&self) -> Result<()> {
        self.neuron.validate()?;
        self.surrogate.validate()?;
        if self.spiking_layers.is_empty() {
            return Err(Error::config("network needs at least one spiking layer"));
        }
        for layer in &self.spiking_layers {
            layer.validate()?;
        }
        self.readout.validate()?;
        for pair in self.spiking_layers.windows(2) {
            if pair[0].fan_out != pair[1].fan_in {
                return Err(Error::dim(format!(
                    "consecutive layers do not compose: {} -> {}",
                    pair[0].fan_out, pair[1].fan_in
                )));
            }
        }
        let last = self.spiking_layers.last().unwrap();
        if self.readout.fan_in != last.fan_out {
            return Err(Error::dim(format!(
                "readout fan_in {} does not match last spiking layer fan_out {}",
                self.readout.fan_in, last.fan_out
            )));
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.spiking_layers[0].fan_in
    }

    pub fn output_dim(&self) -> usize {
        self.readout.fan_out
    }

    /// Total scalar parameter count (spiking layers + readout).
    pub fn param_count(&self) -> usize {
        self.spiking_layers
            .iter()
            .map(LayerParams::param_count)
            .sum::<usize>()
            + self.readout.param_count()
    }
}
