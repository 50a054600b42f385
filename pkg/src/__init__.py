# UniG-Encoder toolkit package
