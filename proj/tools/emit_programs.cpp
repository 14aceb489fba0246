// Writes the bundled construction sources as .crasp files, one per
// expressible task, over the default 62-symbol alphabet. Run by the build to
// populate <build>/programs/v1; not part of the public CLI.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "crasplab/reference.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: emit_programs <output-dir>\n";
    return 2;
  }
  namespace fs = std::filesystem;
  fs::path dir(argv[1]);
  fs::create_directories(dir);

  for (crasplab::TaskKind task : crasplab::expressible_tasks()) {
    crasplab::Expressibility e = crasplab::program_for(task);
    std::string name = crasplab::task_name(task);
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    fs::path path = dir / (name + ".crasp");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 3;
    }
    out << e.program_source;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}
