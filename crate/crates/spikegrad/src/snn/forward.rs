//! Time-stepped forward simulation of the spiking MLP.

use super::{heaviside, normal_cdf, NeuronConfig, SpikeMode, SpikingMlp};
use crate::error::{Error, Result};

/// Everything the simulation produced, per layer and per time step.
///
/// `membranes` holds post-reset potentials; `postsynaptic` holds the input
/// currents Z. With leak 1 these satisfy, for every layer and step,
/// U[t] + threshold * sum_{tau<=t} S[tau] = sum_{tau<=t} Z[tau].
#[derive(Debug, Clone)]
pub struct SimulationTrace {
    pub membranes: Vec<Vec<Vec<f64>>>,
    pub spikes: Vec<Vec<Vec<f64>>>,
    pub postsynaptic: Vec<Vec<Vec<f64>>>,
}

/// One integrate-and-fire update: integrate `z`, fire, reset by subtraction.
///
/// Returns the post-reset membrane and the spike vector.
pub fn if_step(state: &[f64], z: &[f64], cfg: &NeuronConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    if state.len() != z.len() {
        return Err(Error::dim(format!(
            "membrane length {} does not match input length {}",
            state.len(),
            z.len()
        )));
    }
    let mut membrane = Vec::with_capacity(state.len());
    let mut spikes = Vec::with_capacity(state.len());
    for (u_prev, zi) in state.iter().zip(z) {
        let u = cfg.leak * u_prev + zi;
        let s = heaviside(u - cfg.threshold);
        // Guarded so that a zero spike against an infinite threshold stays 0.
        let reset = if s == 0.0 { 0.0 } else { s * cfg.threshold };
        membrane.push(u - reset);
        spikes.push(s);
    }
    Ok((membrane, spikes))
}

#[inline]
pub(crate) fn spike_value(x: f64, mode: SpikeMode, sigma: f64) -> f64 {
    match mode {
        SpikeMode::Binary => heaviside(x),
        SpikeMode::Smooth => normal_cdf(x / sigma),
    }
}

/// Mean firing rate per neuron over a `[T x width]` spike train.
pub fn rate_decode(spikes: &[Vec<f64>]) -> Result<Vec<f64>> {
    if spikes.is_empty() {
        return Err(Error::EmptyTrace(
            "cannot rate-decode a zero-step spike train".into(),
        ));
    }
    let width = spikes[0].len();
    let mut rates = vec![0.0; width];
    for step in spikes {
        if step.len() != width {
            return Err(Error::dim("ragged spike train"));
        }
        for (r, s) in rates.iter_mut().zip(step) {
            *r += s;
        }
    }
    let inv_t = 1.0 / spikes.len() as f64;
    for r in &mut rates {
        *r *= inv_t;
    }
    Ok(rates)
}

/// Simulate the network on one input.
///
/// The real-valued input is injected as a constant current through the first
/// layer at every step (direct encoding); the output is the affine readout of
/// the last layer's firing rates. With `record` the full trace is returned.
pub fn mlp_forward(
    net: &SpikingMlp,
    input: &[f64],
    record: bool,
) -> Result<(Vec<f64>, Option<SimulationTrace>)> {
    net.validate()?;
    if input.len() != net.input_dim() {
        return Err(Error::dim(format!(
            "input length {} does not match first-layer fan_in {}",
            input.len(),
            net.input_dim()
        )));
    }
    let t_steps = net.neuron.time_steps;
    let thr = net.neuron.threshold;
    let leak = net.neuron.leak;
    let n_layers = net.spiking_layers.len();

    // Constant current from the first layer; recomputing it per step would be
    // pure waste.
    let z1 = net.spiking_layers[0].affine(input)?;

    let mut membranes: Vec<Vec<f64>> = net
        .spiking_layers
        .iter()
        .map(|l| vec![0.0; l.fan_out])
        .collect();
    let mut rates = vec![0.0; net.spiking_layers[n_layers - 1].fan_out];

    let mut trace = if record {
        Some(SimulationTrace {
            membranes: vec![Vec::with_capacity(t_steps); n_layers],
            spikes: vec![Vec::with_capacity(t_steps); n_layers],
            postsynaptic: vec![Vec::with_capacity(t_steps); n_layers],
        })
    } else {
        None
    };

    let mut prev_spikes: Vec<f64> = Vec::new();
    for _t in 0..t_steps {
        for l in 0..n_layers {
            let z = if l == 0 {
                z1.clone()
            } else {
                net.spiking_layers[l].affine(&prev_spikes)?
            };
            let layer_mem = &mut membranes[l];
            let mut spikes = Vec::with_capacity(layer_mem.len());
            for (u_post, zi) in layer_mem.iter_mut().zip(&z) {
                let u = leak * *u_post + zi;
                let s = spike_value(u - thr, net.spike_mode, net.surrogate.sigma);
                let reset = if s == 0.0 { 0.0 } else { s * thr };
                *u_post = u - reset;
                spikes.push(s);
            }
            if let Some(tr) = trace.as_mut() {
                tr.membranes[l].push(layer_mem.clone());
                tr.spikes[l].push(spikes.clone());
                tr.postsynaptic[l].push(z);
            }
            if l == n_layers - 1 {
                for (r, s) in rates.iter_mut().zip(&spikes) {
                    *r += s;
                }
            }
            prev_spikes = spikes;
        }
    }
    let inv_t = 1.0 / t_steps as f64;
    for r in &mut rates {
        *r *= inv_t;
    }
    let output = net.readout.affine(&rates)?;
    Ok((output, trace))
}
