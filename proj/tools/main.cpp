#include <cstdio>

int main() { std::puts("qraft (under construction)"); return 0; }
