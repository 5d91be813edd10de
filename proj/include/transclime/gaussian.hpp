#ifndef TRANSCLIME_GAUSSIAN_HPP_
#define TRANSCLIME_GAUSSIAN_HPP_

namespace transclime {

// Standard normal CDF and upper tail, computed through erfc. Relative
// accuracy is a few ulp for the CDF and better than 1e-12 for the upper
// tail over t in [0, 10].
double normal_cdf(double t);
double normal_ccdf(double t);

// Inverse standard normal CDF, Wichura's rational approximation
// (algorithm AS 241, long form). Absolute error below 1e-15 on (0, 1).
// Throws std::invalid_argument outside (0, 1).
double normal_quantile(double p);

}  // namespace transclime

#endif  // TRANSCLIME_GAUSSIAN_HPP_
