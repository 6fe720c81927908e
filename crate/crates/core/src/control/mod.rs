//! Path-following controllers: wrapper saturations, feedforward and feedback
//! steering, the steering torque servo, speed scheduling with feedback
//! linearisation, and the analytic time derivatives of the steering command.

mod chain;
mod gains;
mod longitudinal;
mod steer;
mod wrapper;

pub use chain::{steer_derivative_chain, CurvatureSource, SaturationRates, SpeedRates, SteerCommand};
pub use gains::{ControlGains, FeedbackLaw};
pub use longitudinal::{driving_force, longitudinal_accel, speed_command, target_speed, DrivingForce, SpeedCommand};
pub use steer::{
    desired_heading, feedback_steer, feedforward_steer, saturation_rates, steering_saturation, steering_torque,
};
pub use wrapper::{wrapper, wrapper_deriv, wrapper_second_deriv, WrapperOrder, WrapperSpec};
