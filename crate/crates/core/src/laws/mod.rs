pub mod exact; pub mod asymptotic;
