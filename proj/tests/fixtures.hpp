#pragma once

#include <string>
#include <vector>

#include "sato/matrix.hpp"
#include "sato/series.hpp"

namespace fixtures {

// The worked degree-5 example with sigma = (1 4 2 5 3).
inline const std::vector<std::vector<std::string>> kWorkedB = {
    {"-3*z^3", "-6*z^2", "0", "z^5", "-5*z^4"},
    {"2*z^4", "-2*z^3", "2*z^2", "2*z", "z^5"},
    {"z^5", "-3*z^4", "-4*z^3", "-3*z^2", "-z"},
    {"-3*z", "z^5", "-3*z^4", "3*z^3", "z^2"},
    {"-5*z^2", "0", "z^5", "-5*z^4", "4*z^3"},
};
inline const std::string kWorkedF = "z^5 - 14/5*z^4 - 2/5*z^3 + 1599/125*z^2 + 26836/625*z";
inline const std::string kWorkedSigma = "(1 4 2 5 3)";

inline sato::SeriesMatrix worked_B() {
    sato::SeriesMatrix b(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) b(i, j) = sato::Series::parse(kWorkedB[i][j]);
    return b;
}

inline sato::Series worked_f() { return sato::Series::parse(kWorkedF); }

}  // namespace fixtures
