# Initialisierungspaket für Importstruktur