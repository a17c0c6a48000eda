use crate::{Error, Result};

/// Mean Bose–Einstein occupancy 1/(e^{ω/T} − 1); zero at T = 0.
pub fn bose_occupancy(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(alloc::format!("frequency must be positive, got {omega}")));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::domain(alloc::format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / libm::expm1(omega / temperature))
}

/// Δ_cr = ω₀(T_H − T_C)/(T_H + T_C), where n(ω₀−Δ, T_C) = n(ω₀+Δ, T_H).
pub fn critical_modulation(omega0: f64, t_hot: f64, t_cold: f64) -> Result<f64> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(Error::domain("resonance frequency must be positive"));
    }
    if !(t_cold > 0.0) || !(t_hot >= t_cold) || !t_hot.is_finite() {
        return Err(Error::domain(alloc::format!(
            "need T_H >= T_C > 0, got T_H={t_hot}, T_C={t_cold}"
        )));
    }
    Ok(omega0 * (t_hot - t_cold) / (t_hot + t_cold))
}
