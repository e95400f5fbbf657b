pub mod cosets;
pub mod props;
