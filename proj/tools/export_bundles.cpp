// export_bundles [DIR]: writes DIR/<name>/config.json and expected.json for
// every bundled problem (DIR defaults to ./problems).

#include <filesystem>
#include <iostream>

#include "herglotz/bundles.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path root = argc > 1 ? argv[1] : "problems";
  for (const auto& b : herglotz::bundled_problems()) {
    const auto dir = root / b.name;
    herglotz::write_file_atomic(dir / "config.json", herglotz::to_json(b.config).dump(2) + "\n");
    nlohmann::ordered_json expected = b.expected;
    expected["description"] = b.description;
    herglotz::write_file_atomic(dir / "expected.json", expected.dump(2) + "\n");
    std::cout << dir.string() << "\n";
  }
  return 0;
}
