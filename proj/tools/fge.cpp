// Placeholder CLI; fleshed out once the harness lands.
#include <cstdio>
int main() {
  std::puts("fge: suites not wired yet");
  return 0;
}
