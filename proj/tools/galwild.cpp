#include <iostream>

#include "galwild/field.hpp"

int main() {
    // placeholder until the CLI lands
    std::cout << "galwild\n";
    return 0;
}
