// Projects world population under the two published rate laws and prints
// the scenario table.

#include <fstream>
#include <iostream>

#include "growth.hpp"

#ifndef GROWTH_CASES_FILE
#define GROWTH_CASES_FILE "data/cases.json"
#endif

int main(int argc, char** argv)
{
    std::ifstream in(argc > 1 ? argv[1] : GROWTH_CASES_FILE);
    if (!in) {
        std::cerr << "cannot open case file\n";
        return 2;
    }
    const auto cases = growth::cases::load_cases(in);
    const auto& world = cases.at("world-pop");

    const auto grid = growth::make_grid(2020, 2200, 10);
    std::vector<growth::Projection> runs;
    for (const auto& s : world.scenarios)
        runs.push_back(growth::project(s.model, s.anchor, grid, s.name));

    for (const auto& p : runs)
        std::cout << p.series.label() << ": " << growth::io::feature_summary(p.features) << '\n';
    std::cout << '\n';

    const std::vector<double> years{2030, 2050, 2100, 2150, 2200};
    growth::io::write_scenarios(std::cout, growth::compare_scenarios(runs, years));
}
