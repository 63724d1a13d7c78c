// Acceptance suite: one pass/fail line per criterion. Placeholder; filled in
// alongside the bench module.
int main() { return 0; }
