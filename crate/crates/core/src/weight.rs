use crate::error::{MaassError, Result};
use serde::{Deserialize, Serialize};

/// A weight `k` in `(1/2)Z`, stored as `2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub twice_k: i32,
}

impl Weight {
    pub fn new(twice_k: i32) -> Weight {
        Weight { twice_k }
    }

    pub fn half(twice_k: i32) -> Result<Weight> {
        if twice_k % 2 == 0 {
            return Err(MaassError::InvalidArgument(format!(
                "2k = {twice_k} is not odd"
            )));
        }
        Ok(Weight { twice_k })
    }

    pub fn k(self) -> f64 {
        self.twice_k as f64 / 2.0
    }

    pub fn is_integral(self) -> bool {
        self.twice_k % 2 == 0
    }

    /// `lambda` with `k = lambda + 1/2`.
    pub fn lambda(self) -> i32 {
        (self.twice_k - 1).div_euclid(2)
    }

    /// `(-1)^lambda`.
    pub fn lambda_sign(self) -> i64 {
        if self.lambda().rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Whether `n` lies in the plus-space class `(-1)^lambda n = 0, 1 (mod 4)`.
    pub fn in_plus_class(self, n: i64) -> bool {
        let r = (self.lambda_sign() * n).rem_euclid(4);
        r == 0 || r == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_and_classes() {
        assert_eq!(Weight::new(1).lambda(), 0);
        assert_eq!(Weight::new(3).lambda(), 1);
        assert_eq!(Weight::new(-1).lambda(), -1);
        let w12 = Weight::new(1);
        assert!(w12.in_plus_class(-3) && w12.in_plus_class(4) && !w12.in_plus_class(2));
        let w32 = Weight::new(3);
        assert!(w32.in_plus_class(3) && w32.in_plus_class(-1) && !w32.in_plus_class(1));
    }
}
