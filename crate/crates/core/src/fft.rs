//! Iterative radix-2 FFT. Forward transform uses the kernel `e^{−2πi jm/M}`
//! and is unnormalized.

use num_complex::Complex64;

/// In-place forward FFT; `data.len()` must be a power of two.
pub fn fft(data: &mut [Complex64]) {
    transform(data, -1.0);
}

/// In-place inverse FFT, normalized by `1/M`.
pub fn ifft(data: &mut [Complex64]) {
    transform(data, 1.0);
    let scale = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let m = data.len();
    assert!(m.is_power_of_two(), "fft length must be a power of two");
    if m <= 1 {
        return;
    }
    let bits = m.trailing_zeros();
    for i in 0..m {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= m {
        let ang = sign * 2.0 * core::f64::consts::PI / len as f64;
        for start in (0..m).step_by(len) {
            for k in 0..len / 2 {
                // Twiddles from sin/cos directly to avoid recurrence drift.
                let w = Complex64::new(libm::cos(ang * k as f64), libm::sin(ang * k as f64));
                let a = data[start + k];
                let b = data[start + k + len / 2] * w;
                data[start + k] = a + b;
                data[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}
