//! Illumination analysis for rational configurations of two-sided mirrors.
//!
//! The pipeline: trace rays from a light source ([`tracer`]), decompose the
//! direction circle into arcs with constant itinerary and read off the
//! escape-direction map ([`circle_map`]), turn arcs missing from that map's
//! image into certified unlit planar sectors ([`dark_sector`]), and unfold
//! the configuration into a translation surface whose zeros, poles and
//! genus are counted ([`unfolding`]).

pub mod arcs;
pub mod circle_map;
pub mod cli;
pub mod dark_sector;
pub mod exact_angle;
pub mod geometry;
pub mod render;
pub mod report;
pub mod scene;
pub mod tracer;
pub mod unfolding;
