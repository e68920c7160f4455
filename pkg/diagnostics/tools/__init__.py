# Medidas de entrelazamiento y operadores de dos copias
