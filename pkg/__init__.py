"""canonlink: covariate adjustment in randomised trials with binomial GLMs."""
