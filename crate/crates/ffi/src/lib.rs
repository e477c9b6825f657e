//! C bindings for rdwlab.
//!
//! All exported functions are prefixed with `rdw_` and return an [`RdwStatus`]. Results go
//! through out-pointers. Objects with internal state are opaque handles created by a
//! `*_new`/`rdw_fit`/`rdw_trial_run` call and released with the matching `*_free`.
//! After a failing call, `rdw_last_error_message` describes the error on the calling
//! thread.

#![deny(unsafe_op_in_unsafe_fn)]
#![allow(clippy::missing_safety_doc, clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod gain;
mod psycho;
mod trial;

pub use error::{rdw_last_error_message, rdw_string_free, RdwStatus};
pub use gain::*;
pub use psycho::*;
pub use trial::*;
