// Computes the efficiency curve for six players under the covering
// objective and prints it as CSV, with and without utility design.
#include <iostream>

#include "spoa/report.hpp"

int main() {
    const int n = 6;
    auto w = spoa::indicator_welfare(n);
    auto table = spoa::spoa_curve(n, w, {1, 2, 3, 4, 5, 6}, /*include_design=*/true);
    table.welfare_desc = "indicator";
    std::cout << spoa::curve_csv(table);
    return 0;
}
