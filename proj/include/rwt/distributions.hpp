#pragma once

namespace rwt::dist {

double chisq_cdf(double x, double df);
double chisq_sf(double x, double df);
double chisq_pdf(double x, double df);

/// Upper-α point of the central chi-square: the x with P(χ²_df > x) = α.
double chisq_quantile(double alpha, double df);

/// P(χ²_df(ncp) > x) as a Poisson(ncp/2) mixture of central survival functions.
double noncentral_chisq_sf(double x, double df, double ncp);

double std_normal_cdf(double z);
double std_normal_sf(double z);
double std_normal_pdf(double z);
double std_normal_quantile(double q);

/// Poisson-weighted difference series
///   K*_p(s) = sum_v pois(v; s/2) [P(χ²_{p+2v+2} > c) - P(χ²_{p+2v} > c)],  c = χ²_{p,α}.
/// Note this is twice the derivative of the power s -> P(χ²_p(s) > c); the
/// factor of two is absorbed by dδ/dε in the power influence function.
double kp_star(double s, double df, double alpha);

/// Poisson(λ) probability mass, computed in log space.
double poisson_pmf(int k, double lambda);

}  // namespace rwt::dist
